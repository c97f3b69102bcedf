#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "depthsim/error.hpp"
#include "depthsim/noise.hpp"
#include "depthsim/rng.hpp"
#include "support.hpp"

using namespace depthsim;

namespace {

DepthImage constant_image(int w, int h, float z) { return DepthImage(w, h, z); }

DepthImage step_image(int w, int h, float left, float right) {
  DepthImage d(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) d.at(u, v) = u < w / 2 ? left : right;
  }
  return d;
}

NoiseParams quiet_params() {
  NoiseParams p;
  p.a = p.b = p.c = 0.0;
  p.alpha = 0.0;
  p.rho = 0.0;
  p.lambda_e = 0.0;
  p.margin = 0;
  return p;
}

}  // namespace

TEST_CASE("rng streams") {
  const RngStream a(1, 2, 3, NoiseStage::Dropout);
  const RngStream b(1, 2, 3, NoiseStage::Dropout);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(a.bits(i) == b.bits(i));
  CHECK(RngStream(1, 2, 3, NoiseStage::AxialNoise).key() != a.key());
  CHECK(RngStream(1, 3, 3, NoiseStage::Dropout).key() != a.key());
  CHECK(RngStream(1, 2, 4, NoiseStage::Dropout).key() != a.key());
  CHECK(RngStream(2, 2, 3, NoiseStage::Dropout).key() != a.key());
  double lo = 1, hi = 0, sum = 0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = a.uniform(i);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("crop_resize") {
  const DepthImage c = constant_image(40, 30, 1.5f);
  const DepthImage r = crop_resize(c, 5, 17, 11);
  CHECK(r.width == 17);
  CHECK(r.height == 11);
  for (float z : r.data) CHECK(z == 1.5f);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(0.5f, 3.0f);
  DepthImage any(23, 19);
  for (float& z : any.data) z = u(rng);
  CHECK(crop_resize(any, 0, 23, 19) == any);

  DepthImage sq(2, 2);
  sq.data = {1, 2, 3, 4};
  CHECK(crop_resize(sq, 0, 1, 1).data[0] == 2.5f);
  CHECK(bilinear_sample(sq, 0.5, 0.5) == 2.5);

  try {
    crop_resize(any, 10, 5, 5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
}

TEST_CASE("crop_resize excludes invalid taps") {
  DepthImage sq(2, 2);
  sq.data = {1, 0, 3, 0};
  CHECK(bilinear_sample(sq, 0.5, 0.5) == 2.0);
  DepthImage holes(2, 2, 0.0f);
  CHECK(bilinear_sample(holes, 0.5, 0.5) == 0.0);
}

TEST_CASE("clip_range") {
  DepthImage d(3, 1);
  d.data = {0.0f, 1.0f, 6.0f};
  const DepthImage c = clip_range(d, 0.3, 5.0);
  CHECK(c.data[0] == 0.0f);
  CHECK(c.data[1] == 1.0f);
  CHECK(c.data[2] == 5.0f);
  CHECK_THROWS_AS(clip_range(d, 2.0, 1.0), Error);
}

TEST_CASE("axial_sigma") {
  NoiseParams p;
  const DepthImage c = constant_image(4, 4, 2.0f);
  const FieldMap s = axial_sigma(c, p);
  for (double v : s.data) CHECK(v == doctest::Approx(p.a + p.c / std::sqrt(2.0)).epsilon(1e-15));

  NoiseParams zero = quiet_params();
  for (double v : axial_sigma(c, zero).data) CHECK(v == 0.0);

  // Mean of {1, 3} is 2, so each pixel sits one metre off the mean.
  NoiseParams q = quiet_params();
  q.a = 0.001;
  q.b = 0.002;
  DepthImage two(2, 1);
  two.data = {1.0f, 3.0f};
  for (double v : axial_sigma(two, q).data) CHECK(v == doctest::Approx(0.003).epsilon(1e-15));

  DepthImage with_hole(3, 1);
  with_hole.data = {0.0f, 1.0f, 3.0f};
  const FieldMap sh = axial_sigma(with_hole, q);
  CHECK(sh.data[0] == 0.0);
  CHECK(sh.data[1] == doctest::Approx(0.003));

  try {
    axial_sigma(constant_image(3, 3, 0.0f), p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFrame);
  }
}

TEST_CASE("add_axial_noise") {
  const DepthImage c = constant_image(64, 64, 2.0f);
  const RngStream rng(5, 0, 0, NoiseStage::AxialNoise);
  CHECK(add_axial_noise(c, FieldMap(64, 64, 0.0), rng) == c);
  const FieldMap s(64, 64, 0.01);
  CHECK(add_axial_noise(c, s, rng) == add_axial_noise(c, s, rng));
  DepthImage holes = c;
  holes.data[7] = 0.0f;
  CHECK(add_axial_noise(holes, s, rng).data[7] == 0.0f);
  // Huge sigma: clamped, never negative.
  for (float z : add_axial_noise(c, FieldMap(64, 64, 10.0), rng).data) CHECK(z >= 0.0f);
}

TEST_CASE("axial noise statistics") {
  const int w = 1000, h = 1000;
  const DepthImage c = constant_image(w, h, 2.0f);
  const DepthImage n = add_axial_noise(c, FieldMap(w, h, 0.01), RngStream(9, 1, 0, NoiseStage::AxialNoise));
  std::vector<double> residual(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) residual[i] = static_cast<double>(n.data[i]) - 2.0;
  const double mean = std::accumulate(residual.begin(), residual.end(), 0.0) / residual.size();
  double var = 0.0;
  for (double r : residual) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / (residual.size() - 1));
  CHECK(sd >= 0.0097);
  CHECK(sd <= 0.0103);
  residual.resize(100000);
  // float32 storage quantizes depth near 2 m to 2.4e-7; far below sigma.
  CHECK(testing::ks_statistic_normal(residual, 0.01) < testing::ks_critical(residual.size(), 0.01));
}

TEST_CASE("lateral_sigma") {
  const DepthImage c = constant_image(1000, 1000, 2.0f);
  const RngStream rng(3, 0, 0, NoiseStage::LateralNoise);
  for (double v : lateral_sigma(c, 0.0, rng).data) CHECK(v == 0.0);
  const FieldMap s = lateral_sigma(c, 0.01, rng);
  double sq = 0.0;
  bool bounded = true;
  for (double v : s.data) {
    bounded = bounded && std::abs(v) <= 0.01 * 2.0;
    sq += v * v;
  }
  CHECK(bounded);
  const double expect = 0.01 * 0.01 * 4.0 / 3.0;
  CHECK(std::abs(sq / s.size() - expect) <= 0.03 * expect);
}

TEST_CASE("total_sigma") {
  FieldMap a(1, 1, 3.0), b(1, 1, 4.0), z(1, 1, 0.0);
  CHECK(total_sigma(a, z, 1.0).data[0] == 3.0);
  CHECK(total_sigma(a, b, 1.0).data[0] == 5.0);
  CHECK(total_sigma(FieldMap(1, 1, 1.0), FieldMap(1, 1, 1.0), 4.0).data[0] ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK_THROWS_AS(total_sigma(a, b, 0.5), Error);
}

TEST_CASE("sigma_dropout_prob") {
  const DepthImage d = constant_image(3, 1, 1.0f);
  for (double p : sigma_dropout_prob(FieldMap(3, 1, 0.2), d, 0.5).data) CHECK(p == 0.0);
  FieldMap s(3, 1);
  s.data = {0.1, 0.2, 0.5};
  const FieldMap p = sigma_dropout_prob(s, d, 0.3);
  CHECK(p.data[0] == 0.0);
  CHECK(p.data[1] == doctest::Approx(0.3 * 0.25));
  CHECK(p.data[2] == 0.3);
  for (double v : sigma_dropout_prob(s, d, 0.0).data) CHECK(v == 0.0);
  DepthImage hole = d;
  hole.data[2] = 0.0f;
  const FieldMap ph = sigma_dropout_prob(s, hole, 0.3);
  CHECK(ph.data[1] == 0.3);
  CHECK(ph.data[2] == 0.0);
}

TEST_CASE("sobel_gradient") {
  for (double g : sobel_gradient(constant_image(8, 8, 2.0f)).data) CHECK(g == 0.0);
  const float hstep = 0.7f;
  const DepthImage s = step_image(10, 6, 1.0f, 1.0f + hstep);
  const FieldMap g = sobel_gradient(s);
  const double gmax = *std::max_element(g.data.begin(), g.data.end());
  CHECK(gmax == doctest::Approx(4.0 * hstep).epsilon(1e-6));
  for (int v = 0; v < 6; ++v) {
    CHECK(g.at(4, v) == doctest::Approx(4.0 * hstep).epsilon(1e-6));
    CHECK(g.at(5, v) == doctest::Approx(4.0 * hstep).epsilon(1e-6));
    CHECK(g.at(2, v) == 0.0);
  }

  // Transposition swaps the roles of Gx and Gy, so magnitudes transpose.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> u(0.5f, 3.0f);
  DepthImage a(9, 7);
  for (float& z : a.data) z = u(rng);
  DepthImage t(7, 9);
  for (int v = 0; v < 7; ++v) {
    for (int x = 0; x < 9; ++x) t.at(v, x) = a.at(x, v);
  }
  const FieldMap ga = sobel_gradient(a), gt = sobel_gradient(t);
  for (int v = 0; v < 7; ++v) {
    for (int x = 0; x < 9; ++x) CHECK(ga.at(x, v) == doctest::Approx(gt.at(v, x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sobel_gradient(constant_image(2, 5, 1.0f)), Error);
}

TEST_CASE("sobel ignores holes") {
  DepthImage d = constant_image(7, 7, 2.0f);
  d.at(3, 3) = 0.0f;
  for (double g : sobel_gradient(d).data) CHECK(g == 0.0);
}

TEST_CASE("edge threshold and probability") {
  FieldMap g(5, 1);
  g.data = {0.0, 1.0, 2.0, 3.0, 4.0};
  CHECK(edge_threshold(g, 50.0) == 2.5);
  CHECK(edge_threshold(g, 100.0) == 4.0);
  CHECK(std::isinf(edge_threshold(FieldMap(3, 3, 0.0), 95.0)));

  NoiseParams p;
  p.lambda_e = 0.4;
  p.edge_percentile = 50.0;
  const FieldMap pe = edge_dropout_prob(g, p);
  CHECK(pe.data[0] == 0.0);
  CHECK(pe.data[2] == 0.0);
  CHECK(pe.data[3] == doctest::Approx(0.3));
  CHECK(pe.data[4] == 0.4);
  for (double v : edge_dropout_prob(FieldMap(4, 4, 0.0), p).data) CHECK(v == 0.0);
  p.lambda_e = 0.0;
  for (double v : edge_dropout_prob(g, p).data) CHECK(v == 0.0);
}

TEST_CASE("apply_dropout") {
  const DepthImage d = constant_image(1000, 1000, 1.0f);
  const RngStream rng(4, 0, 0, NoiseStage::Dropout);
  const FieldMap zero(1000, 1000, 0.0);
  CHECK(apply_dropout(d, zero, zero, rng) == d);
  for (float z : apply_dropout(d, FieldMap(1000, 1000, 0.6), FieldMap(1000, 1000, 0.5), rng).data) {
    CHECK(z == 0.0f);
  }
  const DepthImage out = apply_dropout(d, FieldMap(1000, 1000, 0.3), zero, rng);
  const double rate = std::count(out.data.begin(), out.data.end(), 0.0f) / 1e6;
  CHECK(rate >= 0.2986);
  CHECK(rate <= 0.3014);
}

TEST_CASE("larger rho never un-drops a pixel") {
  const int w = 200, h = 150;
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FieldMap sigma(w, h);
  for (double& s : sigma.data) s = u(gen);
  const DepthImage d = constant_image(w, h, 1.0f);
  const FieldMap zero(w, h, 0.0);
  const RngStream rng(7, 3, 1, NoiseStage::Dropout);
  Mask prev = dropout_mask(sigma_dropout_prob(sigma, d, 0.0), zero, rng);
  for (double rho : {0.1, 0.2, 0.5, 0.9, 1.0}) {
    const Mask m = dropout_mask(sigma_dropout_prob(sigma, d, rho), zero, rng);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (prev.data[i]) CHECK(m.data[i] == 1);
    }
    prev = m;
  }
}

TEST_CASE("corrupt pipeline") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<float> u(0.2f, 6.0f);
  DepthImage d(64, 48);
  for (float& z : d.data) z = u(gen);
  d.data[10] = 0.0f;
  const StreamKey key{3, 4, 5};

  SUBCASE("quiet parameters reduce to clipping") {
    const NoiseParams q = quiet_params();
    CHECK(corrupt(d, q, PipelineToggles{}, key) == clip_range(d, q.z_min, q.z_max));
  }
  SUBCASE("deterministic") {
    const NoiseParams p;
    CHECK(corrupt(d, p, {}, key) == corrupt(d, p, {}, key));
    CHECK_FALSE(corrupt(d, p, {}, key) == corrupt(d, p, {}, StreamKey{4, 4, 5}));
  }
  SUBCASE("toggles") {
    const NoiseParams p;
    PipelineToggles off{true, false, false};
    CHECK(corrupt(d, p, off, key) == d);
    PipelineToggles crop_only{true, true, false};
    CHECK(corrupt(d, p, crop_only, key) == crop_resize(d, p.margin, d.width, d.height));
    PipelineToggles noise_only{true, false, true};
    const CorruptionTrace tr = corrupt_traced(d, p, noise_only, key);
    CHECK(tr.clipped == clip_range(d, p.z_min, p.z_max));
  }
  SUBCASE("trace is consistent") {
    const NoiseParams p;
    const CorruptionTrace tr = corrupt_traced(d, p, {}, key);
    CHECK(tr.sigma_z == axial_sigma(tr.clipped, p));
    CHECK(tr.gradient == sobel_gradient(tr.noised));
    CHECK(tr.output == apply_dropout(tr.noised, tr.p_sigma, tr.p_edge, key.stream(NoiseStage::Dropout)));
  }
  SUBCASE("invalid params") {
    NoiseParams p;
    p.rho = 1.5;
    CHECK_THROWS_AS(corrupt(d, p, {}, key), Error);
    p = NoiseParams{};
    p.w = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = NoiseParams{};
    p.z_min = 6.0;
    CHECK_THROWS_AS(p.validate(), Error);
  }
}

TEST_CASE("corrupted output stays in the sensor range") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<float> u(0.1f, 7.0f);
  DepthImage d(300, 200);
  for (float& z : d.data) z = u(gen);
  NoiseParams p;
  p.b = 0.01;
  const CorruptionTrace tr = corrupt_traced(d, p, {}, StreamKey{1, 2, 3});
  const double smax = *std::max_element(tr.sigma_z.data.begin(), tr.sigma_z.data.end());
  std::size_t outside3 = 0, valid = 0;
  for (float z : tr.output.data) {
    CHECK(z >= 0.0f);
    if (z == 0.0f) continue;
    ++valid;
    CHECK(z >= p.z_min - 6 * smax);
    CHECK(z <= p.z_max + 6 * smax);
    if (z < p.z_min - 3 * smax || z > p.z_max + 3 * smax) ++outside3;
  }
  // A Gaussian leaves a 3-sigma band with probability 0.0027 at most.
  CHECK(static_cast<double>(outside3) / valid <= 0.0027);
}
