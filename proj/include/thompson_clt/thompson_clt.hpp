#pragma once

#include "thompson_clt/binning.hpp"
#include "thompson_clt/census.hpp"
#include "thompson_clt/dyadic.hpp"
#include "thompson_clt/errors.hpp"
#include "thompson_clt/frep.hpp"
#include "thompson_clt/io.hpp"
#include "thompson_clt/rewrite.hpp"
#include "thompson_clt/word.hpp"
