// Umbrella header.
#pragma once

#include "kgen/bandscan.hpp"
#include "kgen/charge.hpp"
#include "kgen/clifford.hpp"
#include "kgen/core.hpp"
#include "kgen/fields.hpp"
#include "kgen/generators.hpp"
#include "kgen/json_io.hpp"
#include "kgen/kmaps.hpp"
#include "kgen/parallel.hpp"
#include "kgen/quadrature.hpp"
#include "kgen/sampling.hpp"
#include "kgen/verify.hpp"
