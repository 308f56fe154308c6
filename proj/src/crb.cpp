// SPDX-License-Identifier: Apache-2.0
//
// glqvbce - gridless quantized variational Bayesian channel estimation
// Copyright (C) 2026 The glqvbce authors
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

#include "glqvbce/crb.hpp"
#include "glqvbce/normal.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace glqvbce
{
    arma::vec FimResult::crb_theta() const
    {
        return crb_available ? arma::vec(arma::vec(crb.diag()).subvec(0, paths - 1)) : arma::vec();
    }

    arma::vec FimResult::crb_gain() const
    {
        return crb_available ? arma::vec(arma::vec(crb.diag()).subvec(paths, 2 * paths - 1)) : arma::vec();
    }

    arma::vec FimResult::crb_phase() const
    {
        return crb_available ? arma::vec(arma::vec(crb.diag()).subvec(2 * paths, 3 * paths - 1)) : arma::vec();
    }

    arma::cx_mat noiseless_signal(const ArrayGeometry &geom, const GroundTruthChannel &truth, const PilotBlock &pilot)
    {
        const arma::cx_mat A = steering_matrix(geom, truth.theta);
        const arma::cx_vec h = A * truth.beta;
        return h * pilot.x.st();
    }

    SignalDerivatives z_derivatives(const ArrayGeometry &geom, const GroundTruthChannel &truth, const PilotBlock &pilot)
    {
        const arma::uword M = geom.size(), T = pilot.length(), L = truth.paths();
        SignalDerivatives d{arma::cube(M, T, 3 * L), arma::cube(M, T, 3 * L)};
        for (arma::uword l = 0; l < L; ++l)
        {
            const double g = truth.gain(l), ph = truth.phase(l);
            const double sp = std::sin(ph), cp = std::cos(ph);
            for (arma::uword i = 0; i < M; ++i)
            {
                const double m = double(geom.indices[i]);
                const double s = std::sin(m * truth.theta(l)), c = std::cos(m * truth.theta(l));
                const double xi = s * sp - c * cp;
                const double zeta = s * cp + c * sp;
                for (arma::uword t = 0; t < T; ++t)
                {
                    const double xr = pilot.x(t).real(), xim = pilot.x(t).imag();
                    d.re(i, t, l) = m * g * (xi * xim - zeta * xr);
                    d.re(i, t, L + l) = -xi * xr - zeta * xim;
                    d.re(i, t, 2 * L + l) = -g * (zeta * xr - xi * xim);
                    d.im(i, t, l) = m * g * (-xi * xr - zeta * xim);
                    d.im(i, t, L + l) = zeta * xr - xi * xim;
                    d.im(i, t, 2 * L + l) = -g * (xi * xr + zeta * xim);
                }
            }
        }
        return d;
    }

    double information_coefficient(double mean, double sigma2, const QuantizerSpec &spec)
    {
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("information_coefficient: noise variance must be positive.");
        const double scale = 2.0 / sigma2;
        if (spec.is_identity())
            return scale;
        const double sd = std::sqrt(0.5 * sigma2);
        double sum = 0.0;
        for (int b = 0; b < spec.cells(); ++b)
        {
            const auto [lo, hi] = spec.interval_of(b);
            const normal::Truncated t = normal::truncated((lo - mean) / sd, (hi - mean) / sd);
            if (!std::isfinite(t.log_mass))
                continue; // zero-probability cell
            // [phi(lo) - phi(hi)]^2 / Z = mean_T^2 * Z
            sum += t.mean * t.mean * std::exp(t.log_mass);
        }
        return scale * sum;
    }

    QuantizedCoefficients quantized_coefficients(const arma::cx_mat &Z, double sigma2, const QuantizerSpec &spec)
    {
        QuantizedCoefficients q{arma::mat(Z.n_rows, Z.n_cols), arma::mat(Z.n_rows, Z.n_cols)};
        for (arma::uword t = 0; t < Z.n_cols; ++t)
            for (arma::uword i = 0; i < Z.n_rows; ++i)
            {
                q.lambda(i, t) = information_coefficient(Z(i, t).real(), sigma2, spec);
                q.chi(i, t) = information_coefficient(Z(i, t).imag(), sigma2, spec);
            }
        return q;
    }

    namespace
    {
        arma::mat antenna_information(arma::uword i, const SignalDerivatives &d, const QuantizedCoefficients &q)
        {
            const arma::uword P = d.re.n_slices;
            arma::mat info(P, P, arma::fill::zeros);
            for (arma::uword t = 0; t < d.re.n_cols; ++t)
            {
                const arma::vec dr = d.re.tube(i, t);
                const arma::vec di = d.im.tube(i, t);
                info += q.lambda(i, t) * (dr * dr.t()) + q.chi(i, t) * (di * di.t());
            }
            return info;
        }
    }

    FimResult fim(const ArrayGeometry &geom, const GroundTruthChannel &truth, const PilotBlock &pilot, double sigma2,
                  const QuantizerSpec &spec, Exec exec)
    {
        if (truth.paths() == 0)
            throw std::invalid_argument("fim: at least one path is required.");
        const arma::uword M = geom.size(), L = truth.paths();
        const arma::cx_mat Z = noiseless_signal(geom, truth, pilot);
        const QuantizedCoefficients q = quantized_coefficients(Z, sigma2, spec);
        const SignalDerivatives d = z_derivatives(geom, truth, pilot);

        // Per-antenna partial sums are reduced in antenna order so both paths agree bit for bit
        std::vector<arma::mat> partial(M);
        if (exec == Exec::parallel)
        {
#pragma omp parallel for schedule(static)
            for (arma::uword i = 0; i < M; ++i)
                partial[i] = antenna_information(i, d, q);
        }
        else
        {
            for (arma::uword i = 0; i < M; ++i)
                partial[i] = antenna_information(i, d, q);
        }

        FimResult r;
        r.paths = L;
        r.fim.zeros(3 * L, 3 * L);
        for (const arma::mat &p : partial)
            r.fim += p;
        r.fim = 0.5 * (r.fim + r.fim.t());

        arma::mat inv;
        if (arma::rcond(r.fim) > 1e-15 && arma::inv_sympd(inv, r.fim))
        {
            r.crb = inv;
            r.crb_available = true;
        }
        return r;
    }
}
