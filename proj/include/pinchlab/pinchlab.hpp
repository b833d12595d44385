#pragma once

// Umbrella header.

#include "pinchlab/error.hpp"
#include "pinchlab/linalg.hpp"
#include "pinchlab/curvature.hpp"
#include "pinchlab/frame_search.hpp"
#include "pinchlab/fourdim.hpp"
#include "pinchlab/immersion.hpp"
#include "pinchlab/harness.hpp"
#include "pinchlab/registry.hpp"
#include "pinchlab/report.hpp"
