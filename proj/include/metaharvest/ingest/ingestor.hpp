#pragma once

#include <cstddef>
#include <string>

#include "metaharvest/ingest/document.hpp"
#include "metaharvest/ingest/fetch.hpp"

namespace metaharvest::store {
class Store;
}

namespace metaharvest::ingest {

struct IngestOptions {
    std::size_t max_page_chars = 200'000;
};

/// Converts fetched bytes to prompt text according to their media type:
/// HTML is reduced to visible text, XML and JSON are linearized into
/// "path: value" lines, anything else is decoded as UTF-8 text.
[[nodiscard]] auto bytes_to_text(std::string const& body, std::string const& media_type) -> std::string;

/// Fetches a source's landing page (and metadata file, if any) through the
/// page cache and builds its SourceDocument. With a warm cache no renderer
/// call is made and the result is byte-identical to the first ingest.
class Ingestor {
  public:
    Ingestor(PageRenderer& renderer, store::Store* cache, IngestOptions options = {});

    [[nodiscard]] auto ingest(DatasetSource const& source) -> SourceDocument;

  private:
    struct Page {
        std::string body;
        std::string media_type;
        std::string fetched_at;
    };

    [[nodiscard]] auto fetch_cached(std::string const& url) -> Page;

    PageRenderer& renderer_;
    store::Store* cache_;
    IngestOptions options_;
};

}  // namespace metaharvest::ingest
