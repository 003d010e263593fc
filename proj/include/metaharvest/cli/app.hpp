#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace metaharvest::cli {

/// Work performed below the caches during one command.
struct RunStats {
    std::size_t page_fetches = 0;      ///< renderer calls (page cache misses)
    std::size_t network_requests = 0;  ///< HTTP(S) requests among those fetches
    std::size_t chat_calls = 0;        ///< model calls (LLM cache misses)
    std::size_t embed_calls = 0;       ///< embedder calls (embedding cache misses)
};

/// Entry point of the `metaharvest` tool. `args` excludes the program name.
/// Returns the process exit code.
auto run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err,
             RunStats* stats = nullptr) -> int;

}  // namespace metaharvest::cli
