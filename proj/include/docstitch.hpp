// Copyright 2026 The docstitch Authors.
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

#include "docstitch/analysis.hpp"
#include "docstitch/contextgen.hpp"
#include "docstitch/docbreak.hpp"
#include "docstitch/error.hpp"
#include "docstitch/mono_index.hpp"
#include "docstitch/mono_store.hpp"
#include "docstitch/parallel.hpp"
#include "docstitch/reconstruct.hpp"
#include "docstitch/record.hpp"
#include "docstitch/remote_scorer.hpp"
#include "docstitch/sentence_splitter.hpp"
#include "docstitch/sentfilter.hpp"
#include "docstitch/slide.hpp"
#include "docstitch/unicode.hpp"
