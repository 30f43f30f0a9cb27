#pragma once

#include "mfdfa/analysis.hpp"
#include "mfdfa/engine.hpp"
#include "mfdfa/error.hpp"
#include "mfdfa/io.hpp"
#include "mfdfa/parallel.hpp"
#include "mfdfa/report.hpp"
#include "mfdfa/series.hpp"
#include "mfdfa/spectrum.hpp"
#include "mfdfa/surrogates.hpp"
#include "mfdfa/synth.hpp"
#include "mfdfa/verify.hpp"
