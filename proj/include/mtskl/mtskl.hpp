#pragma once

// Umbrella header for the MTS kernel-similarity toolkit.

#include "mtskl/classify.hpp"
#include "mtskl/correlation.hpp"
#include "mtskl/cross_validation.hpp"
#include "mtskl/dataset_io.hpp"
#include "mtskl/gmm.hpp"
#include "mtskl/kernel_matrix.hpp"
#include "mtskl/kernel_repair.hpp"
#include "mtskl/knn.hpp"
#include "mtskl/log.hpp"
#include "mtskl/lps.hpp"
#include "mtskl/metrics.hpp"
#include "mtskl/model_io.hpp"
#include "mtskl/mts.hpp"
#include "mtskl/paf_schema.hpp"
#include "mtskl/parallel.hpp"
#include "mtskl/pipeline.hpp"
#include "mtskl/preprocess.hpp"
#include "mtskl/report_io.hpp"
#include "mtskl/rng.hpp"
#include "mtskl/svm.hpp"
#include "mtskl/tck.hpp"
#include "mtskl/version.hpp"
#include "mtskl/window_experiment.hpp"
#include "mtskl/windows.hpp"
