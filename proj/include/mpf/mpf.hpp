#pragma once

#include "mpf/augment.hpp"
#include "mpf/bev.hpp"
#include "mpf/error.hpp"
#include "mpf/eval.hpp"
#include "mpf/fusion.hpp"
#include "mpf/io.hpp"
#include "mpf/parallel.hpp"
#include "mpf/postprocess.hpp"
#include "mpf/segmenter.hpp"
#include "mpf/spherical.hpp"
#include "mpf/types.hpp"
