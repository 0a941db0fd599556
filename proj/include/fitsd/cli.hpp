#pragma once

#include <iosfwd>

namespace fitsd {

// Exit codes: 0 ok, 1 findings failed, 2 usage or runtime error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fitsd
