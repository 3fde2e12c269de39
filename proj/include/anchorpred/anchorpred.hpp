// Copyright 2026 The Anchorpred Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANCHORPRED_ANCHORPRED_HPP_
#define ANCHORPRED_ANCHORPRED_HPP_

#include "anchorpred/anchor_url.hpp"
#include "anchorpred/bm25.hpp"
#include "anchorpred/corpus.hpp"
#include "anchorpred/dataset.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/evaluator.hpp"
#include "anchorpred/hash.hpp"
#include "anchorpred/prediction.hpp"
#include "anchorpred/ranker.hpp"
#include "anchorpred/registry.hpp"
#include "anchorpred/scorer.hpp"
#include "anchorpred/stats.hpp"
#include "anchorpred/text.hpp"

#endif  // ANCHORPRED_ANCHORPRED_HPP_
