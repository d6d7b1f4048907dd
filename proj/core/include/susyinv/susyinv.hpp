#pragma once

#include "susyinv/construction.hpp"
#include "susyinv/dynamics.hpp"
#include "susyinv/errors.hpp"
#include "susyinv/operator.hpp"
#include "susyinv/representations.hpp"
#include "susyinv/susy.hpp"
#include "susyinv/timefunc.hpp"
