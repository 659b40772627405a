#include "fsiegel/dispatch.hpp"

#include <algorithm>

#include "fsiegel/field_orders.hpp"

namespace fsiegel {

namespace {

template <int... Qs>
struct OrderList {
  static std::vector<CheckRecord> run(int q, const CellRequest& req) {
    std::vector<CheckRecord> out;
    const bool hit = ((q == Qs ? (out = run_cell<Qs>(req), true) : false) || ...);
    if (!hit) throw ParameterError("field order " + std::to_string(q) + " is not compiled in");
    return out;
  }
  static json parameters(int q) {
    json out;
    const bool hit = ((q == Qs ? (out = field_parameters_for<Qs>(), true) : false) || ...);
    if (!hit) throw ParameterError("field order " + std::to_string(q) + " is not compiled in");
    return out;
  }
  static const std::vector<int>& orders() {
    static const std::vector<int> v{Qs...};
    return v;
  }
};

using Compiled = OrderList<FSIEGEL_FIELD_ORDERS>;

}  // namespace

const std::vector<int>& compiled_field_orders() { return Compiled::orders(); }

bool is_compiled_field_order(int q) {
  const auto& v = compiled_field_orders();
  return std::find(v.begin(), v.end(), q) != v.end();
}

std::vector<CheckRecord> run_cell(int q, const CellRequest& req) { return Compiled::run(q, req); }

json field_parameters(int q) { return Compiled::parameters(q); }

}  // namespace fsiegel
