#pragma once

#include "doctest.h"
#include "generators.hpp"
