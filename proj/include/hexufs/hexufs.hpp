#pragma once

#include "hexufs/asp.hpp"
#include "hexufs/core.hpp"
#include "hexufs/depgraph.hpp"
#include "hexufs/instance.hpp"
#include "hexufs/lexer.hpp"
#include "hexufs/oracles.hpp"
#include "hexufs/pipeline.hpp"
#include "hexufs/satisfaction.hpp"
#include "hexufs/text.hpp"
#include "hexufs/ufs.hpp"
