// Copyright 2026 The splcover Authors
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

#pragma once

#include "splcover/baselines.hpp"
#include "splcover/cmsa.hpp"
#include "splcover/enumeration.hpp"
#include "splcover/errors.hpp"
#include "splcover/exact_setcover.hpp"
#include "splcover/feature_model.hpp"
#include "splcover/harness.hpp"
#include "splcover/pairs.hpp"
#include "splcover/product.hpp"
#include "splcover/product_space.hpp"
#include "splcover/propagation.hpp"
#include "splcover/random.hpp"
#include "splcover/synthetic.hpp"
