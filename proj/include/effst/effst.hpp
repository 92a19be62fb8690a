#pragma once

#include "effst/counting.hpp"
#include "effst/curve.hpp"
#include "effst/distinguish.hpp"
#include "effst/equidist.hpp"
#include "effst/kernel.hpp"
#include "effst/mod.hpp"
#include "effst/primes.hpp"
#include "effst/su2.hpp"
#include "effst/trace_table.hpp"
