#pragma once

#include "quiver.hpp"
#include "ladder.hpp"
#include "resolution.hpp"
#include "spectrum.hpp"
#include "catalog.hpp"
