// Copyright 2026 The XFL Authors
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

#include <compare>
#include <string>
#include <vector>

namespace xfl::transport {

// A federation participant. Ordinals impose the stable total order that the
// pairwise-mask sign convention and deterministic sub-seeding rely on; they
// are unique and dense within a session (0..P-1 in roster order).
struct PartyId {
  int ordinal = -1;
  std::string name;

  auto operator<=>(const PartyId& o) const { return ordinal <=> o.ordinal; }
  bool operator==(const PartyId& o) const {
    return ordinal == o.ordinal && name == o.name;
  }
};

using Roster = std::vector<PartyId>;

}  // namespace xfl::transport
