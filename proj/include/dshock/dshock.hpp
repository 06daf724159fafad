#pragma once

#include "config.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "experiment.hpp"
#include "fv.hpp"
#include "numerics.hpp"
#include "problem.hpp"
#include "profile.hpp"
#include "report.hpp"
