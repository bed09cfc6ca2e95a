#pragma once

#include "sobolev/constants.hpp"
#include "sobolev/corpus.hpp"
#include "sobolev/fields.hpp"
#include "sobolev/kernels.hpp"
#include "sobolev/mms.hpp"
#include "sobolev/multiscale.hpp"
#include "sobolev/order.hpp"
#include "sobolev/radial.hpp"
