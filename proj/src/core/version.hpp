#ifndef AIRTRACE_CORE_VERSION_HPP
#define AIRTRACE_CORE_VERSION_HPP

#define AIRTRACE_VERSION "0.1.0"

#endif
