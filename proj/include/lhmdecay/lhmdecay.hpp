#pragma once

#include "lhmdecay/errors.hpp"
#include "lhmdecay/materials.hpp"
#include "lhmdecay/specfun.hpp"
#include "lhmdecay/green.hpp"
#include "lhmdecay/cavity.hpp"
#include "lhmdecay/dynamics.hpp"
#include "lhmdecay/run_config.hpp"
#include "lhmdecay/commands.hpp"
