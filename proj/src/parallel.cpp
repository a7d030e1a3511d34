#include "capmdp/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace capmdp {

#ifdef _OPENMP
namespace {
const int default_threads = omp_get_max_threads();
}

void set_thread_count(int threads) { omp_set_num_threads(threads > 0 ? threads : default_threads); }
int thread_count() { return omp_get_max_threads(); }
#else
void set_thread_count(int) {}
int thread_count() { return 1; }
#endif

} // namespace capmdp
