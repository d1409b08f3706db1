#include "skan/basis.hpp"

#include <array>
#include <string>

namespace skan {

namespace {

constexpr std::array<BasisInfo, kNumBases> kBases = {{
    {BasisId::LRelu, "lrelu", true},
    {BasisId::LLeakyRelu, "lleakyrelu", false},
    {BasisId::LSwish, "lswish", true},
    {BasisId::LMish, "lmish", true},
    {BasisId::LSoftplus, "lsoftplus", true},
    {BasisId::LHardSigmoid, "lhardsigmoid", false},
    {BasisId::LElu, "lelu", false},
    {BasisId::LShiftedSoftplus, "lss", true},
    {BasisId::LGelu, "lgelu", true},
}};

constexpr std::array<double, 1> kKinkAtZero = {0.0};
constexpr std::array<double, 2> kKinkHardSigmoid = {-3.0, 3.0};

}  // namespace

std::span<const BasisInfo> list_bases() { return kBases; }

const BasisInfo& basis_info(BasisId id) {
    for (const auto& b : kBases)
        if (b.id == id) return b;
    throw std::invalid_argument("basis_info: unknown BasisId");
}

const char* basis_name(BasisId id) { return basis_info(id).name; }

BasisId parse_basis(std::string_view name) {
    if (name == "lshiftedsoftplus") return BasisId::LShiftedSoftplus;
    for (const auto& b : kBases)
        if (name == b.name) return b.id;
    throw std::invalid_argument("unknown basis '" + std::string(name) +
                                "' (expected one of: lrelu lleakyrelu lswish lmish lsoftplus "
                                "lhardsigmoid lelu lss lgelu)");
}

std::span<const double> basis_kinks(BasisId id) {
    switch (id) {
        case BasisId::LRelu:
        case BasisId::LLeakyRelu:
            return kKinkAtZero;
        case BasisId::LHardSigmoid:
            return kKinkHardSigmoid;
        default:
            return {};
    }
}

}  // namespace skan
