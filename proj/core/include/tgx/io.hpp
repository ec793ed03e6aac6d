#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "tgx/tensor.hpp"

namespace tgx {

/// Text format: line 1 = order, line 2 = extents, then row-major values.
/// Writers emit 17 significant digits.
void write_tensor(std::ostream& os, const Tensor& t);
Tensor read_tensor(std::istream& is);

void write_tensor_file(const std::string& path, const Tensor& t);
Tensor read_tensor_file(const std::string& path);

/// Plain key=value manifest lines, keys sorted.
using Manifest = std::map<std::string, std::string>;
void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);

}  // namespace tgx
