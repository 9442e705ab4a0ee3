#include <benchmark/benchmark.h>

// The packaged benchmark_main archive is not portable across compiler
// releases, so the entry point lives here.
BENCHMARK_MAIN();
