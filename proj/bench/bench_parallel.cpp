// Serial reference vs OpenMP paths for corpus ingest and batch querying.
// Usage: bench_parallel [repetitions] [corpus copies]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "fixtures.hpp"

using namespace logdoc;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
  const int copies = argc > 2 ? std::atoi(argv[2]) : 8;

  // The demo corpus repeated under fresh ids to give the threads some work.
  std::vector<std::pair<std::uint32_t, std::string>> docs;
  for (int c = 0; c < copies; ++c)
    for (const auto& [id, text] : fixtures::corpus()) docs.emplace_back(static_cast<std::uint32_t>(docs.size() + 1), text);
  const auto& translator = fixtures::shared_translator();

  std::string serial_kb, parallel_kb;
  double ingest_serial = best_of(reps, [&] {
    KnowledgeBase kb;
    kb.ingest_documents(translator, docs, false);
    serial_kb = kb.serialize();
  });
  double ingest_parallel = best_of(reps, [&] {
    KnowledgeBase kb;
    kb.ingest_documents(translator, docs, true);
    parallel_kb = kb.serialize();
  });

  KnowledgeBase kb;
  kb.ingest_documents(translator, docs, true);
  kb.load_postulates(fixtures::data("postulates.txt"));
  kb.load_isa(fixtures::data("isa.txt"));
  kb.seal();
  std::vector<Query> queries;
  for (const auto& text : fixtures::queries()) queries.push_back(translate_query(text, translator));

  std::vector<SearchResult> serial_results, parallel_results;
  double query_serial = best_of(reps, [&] { serial_results = search_batch(queries, SearchConfig{}, kb, false); });
  double query_parallel = best_of(reps, [&] { parallel_results = search_batch(queries, SearchConfig{}, kb, true); });

  bool same = serial_kb == parallel_kb && serial_results.size() == parallel_results.size();
  for (std::size_t i = 0; same && i < serial_results.size(); ++i) {
    same = serial_results[i].matches.size() == parallel_results[i].matches.size();
    for (std::size_t j = 0; same && j < serial_results[i].matches.size(); ++j)
      same = serial_results[i].matches[j].passage() == parallel_results[i].matches[j].passage() &&
             serial_results[i].matches[j].cost == parallel_results[i].matches[j].cost;
  }

  std::printf("threads %d, %zu documents, %zu facts, %zu queries, best of %d\n", omp_get_max_threads(), docs.size(),
              kb.facts().size(), queries.size(), reps);
  std::printf("%-8s %12s %12s %8s\n", "kernel", "serial_s", "parallel_s", "speedup");
  std::printf("%-8s %12.4f %12.4f %8.2f\n", "ingest", ingest_serial, ingest_parallel, ingest_serial / ingest_parallel);
  std::printf("%-8s %12.4f %12.4f %8.2f\n", "query", query_serial, query_parallel, query_serial / query_parallel);
  std::printf("results identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
