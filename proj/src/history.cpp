#include "ssopt/history.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace ssopt {

void RunHistory::observe_eval(long count, double value) {
  if (eval_curve.empty() || value < eval_curve.back().second) {
    eval_curve.emplace_back(count, value);
  }
}

double RunHistory::best_within(long budget, double fallback) const {
  double best = fallback;
  for (const auto& [count, value] : eval_curve) {
    if (count > budget) break;
    best = value;
  }
  return best;
}

void write_history_jsonl(const RunHistory& history, std::ostream& out) {
  for (const IterationRecord& rec : history.iterations) {
    nlohmann::ordered_json line;
    line["k"] = rec.k;
    line["f"] = rec.f;
    line["alpha"] = rec.alpha;
    line["dirderivs"] = rec.dirderivs;
    line["evals"] = rec.evals;
    out << line.dump() << "\n";
  }
}

void write_history_jsonl(const RunHistory& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open history file: " + path);
  write_history_jsonl(history, out);
}

}  // namespace ssopt
