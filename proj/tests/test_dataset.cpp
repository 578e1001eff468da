#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qecbound/dataset.hpp"

using namespace qecbound;

TEST(Dataset, CsvLayout) {
    ScenarioDataset ds({"name", "x", "n", "blank"});
    ds.add_row({std::string("dephasing"), 0.1, std::int64_t{3}, std::monostate{}});
    ds.add_row({std::string("amp_damp"), std::nan(""), std::int64_t{-1}, 2.5});
    std::ostringstream out;
    ds.write_csv(out);
    EXPECT_EQ(out.str(), "name,x,n,blank\ndephasing,0.10000000000000001,3,\namp_damp,,-1,2.5\n");
}

TEST(Dataset, SeventeenDigitsRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 2.0 / 3.0 * 1e-300, 123456789.123456789, -0.0018891065602226382}) {
        EXPECT_EQ(std::stod(format_number(x)), x);
    }
}

TEST(Dataset, AccessorsAndErrors) {
    ScenarioDataset ds({"a", "b"});
    EXPECT_THROW(ds.add_row({1.0}), std::invalid_argument);
    ds.add_row({1.5, std::monostate{}});
    EXPECT_EQ(ds.number(0, "a"), 1.5);
    EXPECT_TRUE(std::isnan(ds.number(0, "b")));
    EXPECT_THROW(ds.column_index("c"), std::out_of_range);
}
