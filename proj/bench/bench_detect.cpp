/*
 * Copyright 2026 The OSDF Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "osdf/conflict.hpp"

namespace {

std::vector<osdf::Policy> make_policies(std::int64_t n)
{
    osdf::testgen::PolicyGen gen(99, osdf::testgen::wide_universe());
    return gen.policies(static_cast<std::size_t>(n));
}

void BM_DetectSerial(benchmark::State& state)
{
    const auto ps = make_policies(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(osdf::detect_all_serial(ps));
    state.SetComplexityN(state.range(0));
}

void BM_DetectParallel(benchmark::State& state)
{
    const auto ps = make_policies(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(osdf::detect_all(ps));
    state.SetComplexityN(state.range(0));
}

BENCHMARK(BM_DetectSerial)->RangeMultiplier(2)->Range(125, 2000)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectParallel)->RangeMultiplier(2)->Range(125, 2000)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
