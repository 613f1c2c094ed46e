#pragma once

#include "model.hpp"
#include "bisect.hpp"
#include "regime.hpp"
#include "enumerate.hpp"
#include "height.hpp"
#include "counting.hpp"
#include "strings.hpp"
#include "solve.hpp"
#include "divergence.hpp"
#include "spectrum.hpp"
