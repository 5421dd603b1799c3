#include "kras/algebra/ring.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace kras {

std::optional<std::size_t> Ring::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return i;
    return std::nullopt;
}

std::size_t Ring::require(std::string_view name) const
{
    if (auto i = index_of(name))
        return *i;
    throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

bool Ring::has_laurent() const
{
    return std::any_of(laurent.begin(), laurent.end(), [](bool b) { return b; });
}

RingPtr make_ring(std::vector<std::string> names, const std::vector<std::string>& laurent_names)
{
    Ring r;
    r.laurent.assign(names.size(), false);
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (names[i] == names[j])
                throw std::invalid_argument("duplicate ring variable '" + names[i] + "'");
    r.names = std::move(names);
    for (const auto& l : laurent_names)
        r.laurent[r.require(l)] = true;
    return std::make_shared<const Ring>(std::move(r));
}

RingPtr extend_ring(const RingPtr& ring, const std::string& name, bool laurent)
{
    Ring r = *ring;
    if (r.index_of(name))
        throw std::invalid_argument("variable '" + name + "' already in ring");
    r.names.push_back(name);
    r.laurent.push_back(laurent);
    return std::make_shared<const Ring>(std::move(r));
}

bool same_ring(const RingPtr& a, const RingPtr& b)
{
    return a == b || (a && b && *a == *b);
}

bool GrLexGreater::operator()(const Monomial& a, const Monomial& b) const
{
    const long da = std::accumulate(a.begin(), a.end(), 0L);
    const long db = std::accumulate(b.begin(), b.end(), 0L);
    if (da != db)
        return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace kras
