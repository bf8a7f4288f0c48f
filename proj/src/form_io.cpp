#include "constellation/form_io.hpp"

#include <algorithm>
#include <sstream>

namespace constellation {

nlohmann::json form_to_json(const Form& f) {
  std::vector<std::pair<std::vector<int>, Complex>> rows;
  rows.reserve(f.size());
  for (const auto& t : f.terms()) rows.emplace_back(mask_indices(t.mask), t.coeff);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [idx, c] : rows) {
    terms.push_back({{"indices", idx}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"N", f.dim()}, {"terms", std::move(terms)}};
}

Form form_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("N").get<int>();
    std::vector<Form::Term> terms;
    for (const auto& t : j.at("terms")) {
      const auto idx = t.at("indices").get<std::vector<int>>();
      const IndexSubset s(idx, n);
      terms.push_back({s.mask(), Complex(t.at("re").get<double>(), t.value("im", 0.0))});
    }
    return Form::from_terms(n, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("form_from_json: ") + e.what());
  }
}

std::string form_to_string(const Form& f) {
  if (f.is_zero()) return "0";
  std::ostringstream out;
  out.precision(12);
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) out << " + ";
    first = false;
    out << '(' << t.coeff.real() << (t.coeff.imag() < 0 ? "-" : "+") << std::abs(t.coeff.imag())
        << "i)e" << IndexSubset::from_mask(t.mask, f.dim()).to_string();
  }
  return out.str();
}

}  // namespace constellation
