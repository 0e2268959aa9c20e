#pragma once

#include "dhj/common.hpp"
#include "dhj/config_io.hpp"
#include "dhj/dexterity.hpp"
#include "dhj/forward_map.hpp"
#include "dhj/model.hpp"
#include "dhj/pointmap.hpp"
#include "dhj/screws.hpp"
#include "dhj/selection.hpp"
#include "dhj/sweep.hpp"
#include "dhj/verify.hpp"
