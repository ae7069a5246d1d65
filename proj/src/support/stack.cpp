#include "kdb/support/stack.hpp"

#include <pthread.h>

#include <exception>
#include <stdexcept>
#include <string>

namespace kdb {

namespace {

struct Job {
  const std::function<void()> * fn;
  std::exception_ptr error;
};

void * trampoline(void * p)
{
  auto * job = static_cast<Job *>(p);
  try {
    (*job->fn)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void with_stack(std::size_t bytes, const std::function<void()> & fn)
{
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  Job job{&fn, nullptr};
  pthread_t th;
  int rc = pthread_create(&th, &attr, trampoline, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    // Fall back to the current thread rather than failing outright.
    fn();
    return;
  }
  pthread_join(th, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace kdb
