#pragma once

#include "slb/bvp.hpp"
#include "slb/errors.hpp"
#include "slb/evolution.hpp"
#include "slb/fields.hpp"
#include "slb/geometry.hpp"
#include "slb/io.hpp"
#include "slb/layers.hpp"
#include "slb/multipliers.hpp"
#include "slb/specfun.hpp"
