#include "offload/policy_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "offload/errors.hpp"

namespace offload {

namespace {

constexpr std::array<char, 8> kMagic = {'O', 'F', 'L', 'D', 'P', 'O', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put(std::ostream& out, U v) {
    unsigned char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof buf);
}

template <typename U>
U get(std::istream& in) {
    unsigned char buf[sizeof(U)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof buf)) throw IoError("policy file truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(buf[i]) << (8 * i));
    return v;
}

}  // namespace

void write_policy(std::ostream& out, const PolicyTable& table) {
    const auto& space = table.space();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(table.horizon()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(space.locations()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(space.flows()));
    for (Quanta b : space.max_sizes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(b));
    put<std::uint64_t>(out, table.fingerprint());
    put<std::uint8_t>(out, table.mode() == ActionMode::Exhaustive ? 1 : 2);
    const std::size_t m = space.flows();
    for (Epoch t = 1; t <= table.horizon(); ++t) {
        const auto nets = table.networks(t);
        const auto allocs = table.allocations(t);
        for (std::size_t i = 0; i < nets.size(); ++i) {
            put<std::uint8_t>(out, nets[i]);
            for (std::size_t j = 0; j < m; ++j) put<std::uint16_t>(out, allocs[i * m + j]);
        }
    }
    if (!out) throw IoError("failed writing policy table");
}

PolicyTable read_policy(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw IoError("not a policy table (bad magic)");
    }
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion) throw IoError("unsupported policy table version " + std::to_string(version));
    const auto horizon = static_cast<Epoch>(get<std::uint32_t>(in));
    const auto locations = static_cast<int>(get<std::uint32_t>(in));
    const auto m = get<std::uint32_t>(in);
    if (horizon < 1 || locations < 1 || m < 1 || m > 64) throw IoError("policy table header is corrupt");
    std::vector<Quanta> sizes(m);
    for (auto& b : sizes) {
        b = static_cast<Quanta>(get<std::uint32_t>(in));
        if (b < 0 || b > 65535) throw IoError("policy table header is corrupt");
    }
    const auto fingerprint = get<std::uint64_t>(in);
    const auto mode_byte = get<std::uint8_t>(in);
    if (mode_byte != 1 && mode_byte != 2) throw IoError("policy table has an unknown action mode");
    const ActionMode mode = mode_byte == 1 ? ActionMode::Exhaustive : ActionMode::EdfRestricted;

    PolicyTable table(StateSpace(locations, sizes), horizon, mode, fingerprint);
    for (Epoch t = 1; t <= horizon; ++t) {
        auto nets = table.networks(t);
        auto allocs = table.allocations(t);
        for (std::size_t i = 0; i < nets.size(); ++i) {
            nets[i] = get<std::uint8_t>(in);
            if (nets[i] > 2) throw IoError("policy table has an invalid network code");
            for (std::size_t j = 0; j < m; ++j) allocs[i * m + j] = get<std::uint16_t>(in);
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes after policy table");
    return table;
}

void save_policy(const PolicyTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_policy(out, table);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

PolicyTable load_policy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read policy file '" + path + "'");
    try {
        return read_policy(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

}  // namespace offload
