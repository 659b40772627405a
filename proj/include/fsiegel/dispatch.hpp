#pragma once

// Runtime field order -> compiled instantiation.

#include <vector>

#include "fsiegel/checks.hpp"

namespace fsiegel {

const std::vector<int>& compiled_field_orders();
bool is_compiled_field_order(int q);

/// Runs the request on the instantiation for q; ParameterError if q is not compiled in.
std::vector<CheckRecord> run_cell(int q, const CellRequest& req);

json field_parameters(int q);

}  // namespace fsiegel
