// Copyright 2026 The IntentMine Authors.
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

// JSON-over-HTTP front end for Service. Error bodies are {"error": msg}:
// ValidationError and FormatError map to 400, NotFoundError to 404 and
// ConflictError to 409.

#pragma once

#include "intentmine/embed.h"
#include "intentmine/service.h"
#include "json.hpp"

// After Eigen: <resolv.h>, pulled in by httplib, defines a `_res` macro.
#include "httplib.h"

namespace intentmine {

void RegisterRoutes(httplib::Server& server, Service& service);

// Reads the optional training fields of an adapt request.
TrainConfig TrainConfigFromJson(const nlohmann::json& body);

}  // namespace intentmine
