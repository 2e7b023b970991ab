#pragma once

#include "vdc/bounds.hpp"
#include "vdc/counting.hpp"
#include "vdc/errors.hpp"
#include "vdc/ff_geometry.hpp"
#include "vdc/groebner.hpp"
#include "vdc/integer.hpp"
#include "vdc/polynomial.hpp"
#include "vdc/prime_field.hpp"
#include "vdc/records.hpp"
#include "vdc/system.hpp"
#include "vdc/vdc_engine.hpp"
#include "vdc/weight.hpp"
