#pragma once

#include "skillaudit/biaslab.hpp"
#include "skillaudit/csv_io.hpp"
#include "skillaudit/error.hpp"
#include "skillaudit/pcr.hpp"
#include "skillaudit/predictors.hpp"
#include "skillaudit/protocols.hpp"
#include "skillaudit/report.hpp"
#include "skillaudit/rng.hpp"
#include "skillaudit/skill.hpp"
#include "skillaudit/student_t.hpp"
#include "skillaudit/synthgen.hpp"
#include "skillaudit/timeseries.hpp"
