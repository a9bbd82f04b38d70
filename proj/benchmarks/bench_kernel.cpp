#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ivalkit/conformance.hpp"
#include "ivalkit/detail/kernels.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/oracle.hpp"
#include "ivalkit/rounding.hpp"

using namespace ivalkit;

namespace {

const Format b64 = Format::binary64();

std::vector<double> finite_doubles(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v;
    v.reserve(n);
    while (v.size() < n) {
        const std::uint64_t bits = rng();
        if (((bits >> 52) & 0x7FF) == 0x7FF) continue;
        v.push_back(std::bit_cast<double>(bits));
    }
    return v;
}

std::vector<Interval> random_intervals(std::size_t n, std::uint64_t seed) {
    const auto xs = finite_doubles(2 * n, seed);
    std::vector<Interval> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = xs[2 * i], b = xs[2 * i + 1];
        if (a > b) std::swap(a, b);
        out.push_back(Interval::make(a, b, b64));
    }
    return out;
}

void BM_scalar_add_dir(benchmark::State& state) {
    const auto xs = finite_doubles(4096, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const double r = detail::add_dir(xs[i & 4095], xs[(i + 1) & 4095],
                                         Direction::Down);
        benchmark::DoNotOptimize(r);
        ++i;
    }
}
BENCHMARK(BM_scalar_add_dir);

void BM_scalar_mul_dir(benchmark::State& state) {
    const auto xs = finite_doubles(4096, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        const double r = detail::mul_dir(xs[i & 4095], xs[(i + 1) & 4095],
                                         Direction::Up);
        benchmark::DoNotOptimize(r);
        ++i;
    }
}
BENCHMARK(BM_scalar_mul_dir);

void BM_interval_mul(benchmark::State& state) {
    const auto iv = random_intervals(1024, 3);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mul(iv[i & 1023], iv[(i + 1) & 1023]));
        ++i;
    }
}
BENCHMARK(BM_interval_mul);

void BM_interval_div(benchmark::State& state) {
    const auto iv = random_intervals(1024, 4);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(div(iv[i & 1023], iv[(i + 1) & 1023]));
        ++i;
    }
}
BENCHMARK(BM_interval_div);

void BM_next_up(benchmark::State& state) {
    const auto xs = finite_doubles(4096, 5);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(next_up(xs[i & 4095], b64));
        ++i;
    }
}
BENCHMARK(BM_next_up);

void BM_hull_exp_moderate(benchmark::State& state) {
    const Interval x = Interval::make(-3.25, 11.5, b64);
    for (auto _ : state) benchmark::DoNotOptimize(tightest_hull(Fn::Exp, x));
}
BENCHMARK(BM_hull_exp_moderate);

void BM_hull_sin_moderate(benchmark::State& state) {
    const Interval x = Interval::make(2.0, 4.0, b64);
    for (auto _ : state) benchmark::DoNotOptimize(tightest_hull(Fn::Sin, x));
}
BENCHMARK(BM_hull_sin_moderate);

void BM_hull_sin_huge_argument(benchmark::State& state) {
    const Interval x = Interval::make(0x1p+100, 0x1.0000000000001p+100, b64);
    for (auto _ : state) benchmark::DoNotOptimize(tightest_hull(Fn::Sin, x));
}
BENCHMARK(BM_hull_sin_huge_argument);

void BM_classify(benchmark::State& state) {
    const Interval x = Interval::make(0.0, 10.0, b64);
    const TestingPair pair(Fn::Sin, b64, {x}, tightest_hull(Fn::Sin, x),
                           accurate_envelope(Fn::Sin, x));
    const Interval z = *pair.y_prime;
    for (auto _ : state) benchmark::DoNotOptimize(classify(z, pair).level);
}
BENCHMARK(BM_classify);

void BM_hex_roundtrip(benchmark::State& state) {
    const Interval x = Interval::make(0.1, 0x1.921fb54442d18p+1, b64);
    for (auto _ : state) {
        const std::string s = format_interval_hex(x);
        benchmark::DoNotOptimize(parse_interval_hex(s, b64));
    }
}
BENCHMARK(BM_hex_roundtrip);

} // namespace

BENCHMARK_MAIN();
