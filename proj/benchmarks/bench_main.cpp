#include <benchmark/benchmark.h>

// The distribution's benchmark_main archive is built with a different LTO
// version, so the entry point lives here.
BENCHMARK_MAIN();
