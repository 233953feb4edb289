#pragma once

#include "windpart/ar_burg.hpp"
#include "windpart/error.hpp"
#include "windpart/forecast.hpp"
#include "windpart/io/calendar.hpp"
#include "windpart/io/csv.hpp"
#include "windpart/io/report.hpp"
#include "windpart/io/svg.hpp"
#include "windpart/synth.hpp"
#include "windpart/timeseries.hpp"
#include "windpart/wavelet.hpp"
