// Copyright 2026 The crset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "crset/account.hpp"
#include "crset/blobstore.hpp"
#include "crset/bloom.hpp"
#include "crset/cascade.hpp"
#include "crset/checker.hpp"
#include "crset/codec.hpp"
#include "crset/error.hpp"
#include "crset/fileio.hpp"
#include "crset/ids.hpp"
#include "crset/privacy.hpp"
#include "crset/random.hpp"
#include "crset/registry.hpp"
