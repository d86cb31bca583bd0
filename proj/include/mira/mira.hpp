#pragma once

#include "mira/assemble.hpp"
#include "mira/commands.hpp"
#include "mira/config.hpp"
#include "mira/corpus.hpp"
#include "mira/dataset.hpp"
#include "mira/embedding.hpp"
#include "mira/error.hpp"
#include "mira/evaluation.hpp"
#include "mira/extractive.hpp"
#include "mira/fact_metrics.hpp"
#include "mira/facts.hpp"
#include "mira/html.hpp"
#include "mira/jsonl.hpp"
#include "mira/ngram_metrics.hpp"
#include "mira/parallel.hpp"
#include "mira/remote.hpp"
#include "mira/report.hpp"
#include "mira/rouge.hpp"
#include "mira/selection.hpp"
#include "mira/text.hpp"
#include "mira/util.hpp"
