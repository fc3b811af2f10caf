#pragma once

#include "esrinet/calibration.hpp"
#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"
#include "esrinet/indices.hpp"
#include "esrinet/network.hpp"
#include "esrinet/parallel.hpp"
#include "esrinet/propagation.hpp"
#include "esrinet/regimes.hpp"
#include "esrinet/report.hpp"
#include "esrinet/strategies.hpp"
#include "esrinet/synth.hpp"
