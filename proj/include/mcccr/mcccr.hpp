#pragma once

#include "baselines.hpp"
#include "config.hpp"
#include "core.hpp"
#include "dataset.hpp"
#include "evaluation.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "multiclass.hpp"
#include "noise.hpp"
#include "random.hpp"
#include "report.hpp"
#include "resample.hpp"
#include "synthetic.hpp"
