#ifndef AIRTRACE_TESTS_TEST_UTIL_HPP
#define AIRTRACE_TESTS_TEST_UTIL_HPP

#include "doctest.h"

#include "core/error.hpp"

namespace airtrace_tests {

template <typename Fn>
void expect_error(airtrace::Errc code, Fn&& fn) {
    try {
        fn();
        FAIL_CHECK("expected an error, none thrown");
    } catch (const airtrace::Error& e) {
        CHECK(e.code() == code);
    }
}

} // namespace airtrace_tests

#endif
