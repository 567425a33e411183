#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace jobrec {

// Named tensor for model persistence.  On disk: magic "JRT1", a u32
// format version, a u32 tensor count, then per tensor the name, the
// dims and row-major f32 data.  All scalars little-endian.
struct Tensor {
    std::string name;
    std::vector<uint64_t> dims;
    std::vector<float> data;  // product(dims) entries
};

void write_tensors(std::ostream& out, const std::vector<Tensor>& tensors);

// throws Error(Data) on bad magic, unsupported version or truncation
std::vector<Tensor> read_tensors(std::istream& in);

}  // namespace jobrec
