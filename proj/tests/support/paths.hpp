#pragma once

#include <cstdlib>
#include <filesystem>

namespace adatest {

inline std::filesystem::path test_data_dir() { return ADATEST_TEST_DATA_DIR; }

}  // namespace adatest
