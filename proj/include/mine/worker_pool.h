#ifndef MINE_WORKER_POOL_H_
#define MINE_WORKER_POOL_H_

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mine {

// Fixed set of threads that run one task per worker and then meet at a
// barrier. run() returns once every worker has finished; the first
// exception thrown by a worker is rethrown there.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return threads_.size(); }

  void run(const std::function<void(std::size_t worker)>& task);

  // Spreads fn(0..n-1) over the workers.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

 private:
  void Loop(std::size_t worker);

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
};

}  // namespace mine

#endif  // MINE_WORKER_POOL_H_
