#pragma once

// Umbrella header. The SuiteSparse client (frcn/suitesparse.hpp) is separate
// because it needs libcurl and zlib.

#include "frcn/bench.hpp"
#include "frcn/cn_placement.hpp"
#include "frcn/common.hpp"
#include "frcn/energy.hpp"
#include "frcn/graph.hpp"
#include "frcn/hex_lattice.hpp"
#include "frcn/io.hpp"
#include "frcn/pipeline.hpp"
#include "frcn/sa_placement.hpp"
#include "frcn/solvers.hpp"
