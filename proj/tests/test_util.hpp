// Copyright 2026 the czk authors.
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

#ifndef CZK_TESTS_TEST_UTIL_HPP_
#define CZK_TESTS_TEST_UTIL_HPP_

#include <functional>

#include "czk/mpc.hpp"
#include "czk/transport.hpp"

namespace czk::testing {

// Spins up N parties with a fresh dealer and one thread each.
inline void run_mpc_parties(int n, const DealerCounts& counts, uint64_t seed,
                            const std::function<void(MpcParty&)>& body,
                            std::chrono::milliseconds timeout =
                                std::chrono::milliseconds(30000)) {
  Rng dealer_rng = Rng(seed).fork("dealer");
  auto bundles = dealer_setup(n, counts, dealer_rng);
  run_parties(
      n,
      [&](int id, Transport& net) {
        MpcParty party(bundles[id], net, Rng(seed).fork("party", id));
        body(party);
      },
      timeout);
}

}  // namespace czk::testing

#endif  // CZK_TESTS_TEST_UTIL_HPP_
