#pragma once

#include <string>

#include <doctest.h>

#include "cllr/syntax.hpp"

namespace cllr::test {

inline Term t(const std::string& s) { return parse(s); }

}  // namespace cllr::test

namespace doctest {
template <>
struct StringMaker<cllr::Term> {
    static String convert(const cllr::Term& t) { return cllr::format(t).c_str(); }
};
}  // namespace doctest
