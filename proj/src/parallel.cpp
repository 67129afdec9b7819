// SPDX-License-Identifier: Apache-2.0

#include "kgp/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace kgp
{

int thread_count()
{
  if (const char *env = std::getenv("KGP_THREADS"))
  {
    try
    {
      const int n = std::stoi(env);
      if (n > 0)
      {
        return n;
      }
    }
    catch (const std::exception &)
    {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body)
{
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      body(i);
    }
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w)
  {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    pool.emplace_back([&, lo, hi] {
      try
      {
        for (std::size_t i = lo; i < hi; ++i)
        {
          body(i);
        }
      }
      catch (...)
      {
        std::lock_guard lock(guard);
        if (!first)
        {
          first = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  if (first)
  {
    std::rethrow_exception(first);
  }
}

}  // namespace kgp
