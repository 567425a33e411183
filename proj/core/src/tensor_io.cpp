#include "jobrec/tensor_io.hpp"

#include <cstring>
#include <istream>
#include <ostream>

#include "jobrec/error.hpp"

namespace jobrec {
namespace {

constexpr char kMagic[4] = {'J', 'R', 'T', '1'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void put_f32(std::ostream& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) data_error("tensor file truncated");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) data_error("tensor file truncated");
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

float get_f32(std::istream& in) {
    uint32_t bits = get_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

void write_tensors(std::ostream& out, const std::vector<Tensor>& tensors) {
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        put_u32(out, static_cast<uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        put_u32(out, static_cast<uint32_t>(t.dims.size()));
        uint64_t n = 1;
        for (uint64_t d : t.dims) {
            put_u64(out, d);
            n *= d;
        }
        if (n != t.data.size()) data_error("tensor '" + t.name + "' dims do not match data size");
        for (float v : t.data) put_f32(out, v);
    }
}

std::vector<Tensor> read_tensors(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        data_error("bad tensor file magic");
    uint32_t version = get_u32(in);
    if (version != kVersion)
        data_error("unsupported tensor file version " + std::to_string(version));
    uint32_t count = get_u32(in);
    std::vector<Tensor> tensors(count);
    for (auto& t : tensors) {
        uint32_t name_len = get_u32(in);
        t.name.resize(name_len);
        if (!in.read(t.name.data(), name_len)) data_error("tensor file truncated");
        uint32_t ndims = get_u32(in);
        t.dims.resize(ndims);
        uint64_t n = 1;
        for (auto& d : t.dims) {
            d = get_u64(in);
            n *= d;
        }
        if (n > (1ull << 32)) data_error("tensor '" + t.name + "' implausibly large");
        t.data.resize(n);
        for (auto& v : t.data) v = get_f32(in);
    }
    return tensors;
}

}  // namespace jobrec
