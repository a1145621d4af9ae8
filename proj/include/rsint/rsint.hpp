#pragma once

#include "rsint/bv.hpp"
#include "rsint/counterexample.hpp"
#include "rsint/errors.hpp"
#include "rsint/expr.hpp"
#include "rsint/integrand.hpp"
#include "rsint/io.hpp"
#include "rsint/positivity.hpp"
#include "rsint/properties.hpp"
#include "rsint/stieltjes.hpp"
