#pragma once

#include "bench.hpp"
#include "diffusion.hpp"
#include "fdcalc.hpp"
#include "field.hpp"
#include "image_io.hpp"
#include "metrics.hpp"
#include "noise.hpp"
#include "structure_tensor.hpp"
#include "synthetic.hpp"
#include "tv_weights.hpp"
