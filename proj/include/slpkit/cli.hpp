#pragma once

namespace slpkit {

// Exit codes: 0 success or "yes", 1 decision "no", 2 campaign failure,
// 3 usage error, 4 runtime failure (budget, timeout, inconclusive search).
int cli_main(int argc, char** argv);

}  // namespace slpkit
