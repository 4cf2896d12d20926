// Copyright 2026 the adaptmt authors
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

// Reference-scorer values for tests/data/metrics_fixture.{hyp,ref}.txt,
// produced by tests/oracles/score_metrics_fixture.py (sacrebleu 2.6.0).
namespace adaptmt::oracle {

inline constexpr double kFixtureBleu = 70.689224;
inline constexpr double kFixtureChrf = 86.723874;
inline constexpr double kFixtureTer = 13.232104;

}  // namespace adaptmt::oracle
