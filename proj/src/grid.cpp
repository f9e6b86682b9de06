/*
 * Copyright 2026 The sdns Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdns/grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace sdns {

namespace {

int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

Grid::Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
  if (dim != 2 && dim != 3) throw Error("grid: dimension must be 2 or 3");
  if (n < 8 || n % 2 != 0) throw Error("grid: n must be even and >= 8");
  if (!(length > 0.0)) throw Error("grid: length must be positive");

  size_ = 1;
  volume_ = 1.0;
  for (int a = 0; a < dim; ++a) {
    size_ *= static_cast<std::size_t>(n);
    volume_ *= length;
  }

  auto tables = std::make_shared<Tables>();
  tables->lattice.resize(size_);
  tables->k.resize(size_);
  tables->k2.resize(size_);
  tables->mirror.resize(size_);
  tables->nyquist.resize(size_);
  tables->canonical.resize(size_);
  const double unit = k_unit();
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::array<int, 3> pos{0, 0, 0};
    std::size_t rest = idx;
    for (int a = dim - 1; a >= 0; --a) {
      pos[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    std::array<int, 3> lat{0, 0, 0};
    std::array<double, 3> kv{0.0, 0.0, 0.0};
    bool nyq = false;
    double k2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      if (pos[a] == n / 2) nyq = true;
      lat[a] = wavenumber(pos[a], n);
      kv[a] = unit * lat[a];
      k2 += kv[a] * kv[a];
    }
    std::size_t mirror = 0;
    for (int a = 0; a < dim; ++a) mirror = mirror * n + static_cast<std::size_t>((n - pos[a]) % n);
    bool canonical = false;
    if (!nyq) {
      for (int a = 0; a < dim; ++a) {
        if (lat[a] != 0) {
          canonical = lat[a] > 0;
          break;
        }
      }
    }
    tables->lattice[idx] = lat;
    tables->k[idx] = kv;
    tables->k2[idx] = k2;
    tables->mirror[idx] = mirror;
    tables->nyquist[idx] = nyq ? 1 : 0;
    tables->canonical[idx] = canonical ? 1 : 0;
  }
  tables_ = std::move(tables);
}

std::size_t Grid::index_of(const std::array<int, 3>& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    if (k[a] <= -n_ / 2 || k[a] >= n_ / 2) throw Error("grid: lattice vector outside the resolved band");
    idx = idx * n_ + static_cast<std::size_t>((k[a] + n_) % n_);
  }
  return idx;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << dim_ << " n=" << n_ << " L=" << length_;
  return os.str();
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw Error(std::string(what) + ": grid mismatch (" + a.describe() + " vs " + b.describe() + ")");
}

namespace fft {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_tuple(grid.dim(), grid.n(), sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(grid.dim()), grid.n());
    std::vector<Complex> in(grid.size()), out(grid.size());
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims.data(), reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("fft: plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(const Grid& grid, int sign, std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != grid.size() || out.size() != grid.size()) throw Error("fft: buffer size mismatch");
  if (static_cast<const void*>(in.data()) == static_cast<const void*>(out.data()))
    throw Error("fft: in-place transforms are not supported");
  fftw_plan plan = cache().get(grid, sign);
  // FFTW does not modify the input of an out-of-place complex transform.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void forward(const Grid& grid, std::span<const Complex> physical, std::span<Complex> spectral) {
  execute(grid, FFTW_FORWARD, physical, spectral);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : spectral) c *= scale;
}

void inverse(const Grid& grid, std::span<const Complex> spectral, std::span<Complex> physical) {
  execute(grid, FFTW_BACKWARD, spectral, physical);
}

}  // namespace fft

}  // namespace sdns
