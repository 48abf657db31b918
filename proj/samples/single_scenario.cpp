// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// Evaluates the UPA with a random precoder, then runs both optimizers on one
// propagation environment.

#include "fluidkey/fluidkey.hpp"

#include <iostream>

int main()
{
    using namespace fluidkey;
    Scenario sc = Scenario::reference();
    sc.seed = 7;
    const RngStreams streams(sc.seed);
    Rng path_rng = streams.stream("paths");
    const PathSet paths = sample_paths(sc, path_rng);
    const PenaltyConfig penalty = penalty_for(sc);

    const Layout upa = upa_layout(sc);
    Rng rng = streams.stream("example");
    const Precoder p = random_precoder(sc.n_antennas, sc.n_pilots, sc.p_max, rng);
    const auto cov = analytic_covariance(upa, paths, sc.wavelength);
    std::cout << "UPA, random precoder: " << kgr(p, cov, sc.noise_var).bits << " bits/s/Hz\n";

    const OptTrace pso = run_pso(sc, paths, PsoConfig{}, streams, penalty);
    std::cout << "joint PSO:            " << pso.best.raw_kgr << " bits/s/Hz\n";

    const AoResult ao = run_ao(sc, paths, AoConfig{}, streams, penalty);
    std::cout << "alternating PGD+PSO:  " << ao.best_kgr << " bits/s/Hz\n";
    return 0;
}
