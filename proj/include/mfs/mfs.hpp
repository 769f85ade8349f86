#pragma once

#include "mfs/errors.hpp"
#include "mfs/geometry.hpp"
#include "mfs/linalg.hpp"
#include "mfs/expansion.hpp"
#include "mfs/arnoldi.hpp"
#include "mfs/solvers.hpp"
#include "mfs/bench.hpp"
