#pragma once

#include "errors.hpp"
#include "series.hpp"
#include "special.hpp"
#include "classify.hpp"
#include "operator.hpp"
#include "io.hpp"
