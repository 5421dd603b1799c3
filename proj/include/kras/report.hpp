#pragma once

#include <string>
#include <vector>

namespace kras {

enum class Status { pass, fail, reported };

inline const char* status_name(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::reported:
        return "reported";
    }
    return "fail";
}

struct Check {
    std::string name;
    Status status = Status::fail;
    std::string residual;  // canonical printed form, "0" when clean
    std::string anchor;    // which construction or claim the check replays
};

struct Report {
    std::vector<Check> checks;

    void add(std::string name, bool ok, std::string residual, std::string anchor = {})
    {
        checks.push_back({std::move(name), ok ? Status::pass : Status::fail, std::move(residual), std::move(anchor)});
    }
    void note(std::string name, std::string residual, std::string anchor = {})
    {
        checks.push_back({std::move(name), Status::reported, std::move(residual), std::move(anchor)});
    }
    void append(const Report& other, const std::string& prefix = {})
    {
        for (const auto& c : other.checks)
            checks.push_back({prefix + c.name, c.status, c.residual, c.anchor});
    }

    /// True when no check failed; "reported" entries never fail a run.
    bool ok() const
    {
        for (const auto& c : checks)
            if (c.status == Status::fail)
                return false;
        return true;
    }
    const Check* find(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }
};

}  // namespace kras
