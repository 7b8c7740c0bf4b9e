#pragma once

// Convenience header pulling in the whole library.

#include "sprayeval/cli.hpp"
#include "sprayeval/dataset.hpp"
#include "sprayeval/detection_metrics.hpp"
#include "sprayeval/digest.hpp"
#include "sprayeval/errors.hpp"
#include "sprayeval/geometry.hpp"
#include "sprayeval/io.hpp"
#include "sprayeval/planner.hpp"
#include "sprayeval/random.hpp"
#include "sprayeval/report.hpp"
#include "sprayeval/spray_model.hpp"
#include "sprayeval/stats.hpp"
#include "sprayeval/synthetic.hpp"
#include "sprayeval/transforms.hpp"
#include "sprayeval/version.hpp"
