// Copyright 2026 The propaganda-lens Authors.
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

#ifndef PLENS_PLENS_HPP_
#define PLENS_PLENS_HPP_

#include "plens/botscores.hpp"
#include "plens/classifier.hpp"
#include "plens/config.hpp"
#include "plens/corpus.hpp"
#include "plens/csv.hpp"
#include "plens/fetch.hpp"
#include "plens/metrics.hpp"
#include "plens/ngram.hpp"
#include "plens/pipeline.hpp"
#include "plens/stats.hpp"
#include "plens/svg.hpp"
#include "plens/text.hpp"

#endif  // PLENS_PLENS_HPP_
