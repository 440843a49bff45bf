#pragma once

// JSON HTTP API over a Store. Long-running work (classification, ablation,
// projection) runs as jobs on a worker thread; the request threads only
// enqueue and poll.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "eit/embedding.hpp"
#include "eit/store.hpp"

namespace eit {

struct ServiceOptions {
  std::string api_token;               // empty disables every mutating endpoint
  std::string cors_origin = "*";
  std::filesystem::path static_dir;    // served under /ui when set
  std::size_t page_size = 50;
  std::size_t request_threads = 8;
};

class Service {
 public:
  /// The store and provider must outlive the service. The service never
  /// modifies the corpus; labels and runs are persisted as they change.
  Service(Store& store, const EmbeddingProvider& provider, ServiceOptions options = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket. Port 0 picks a free port; returns the port
  /// actually bound. Throws Error when binding fails.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Requires a prior bind().
  void run();

  void stop();

  /// Blocks until the job queue is empty and no job is running.
  void wait_idle();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eit
