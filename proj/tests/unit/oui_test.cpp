#include <gtest/gtest.h>

#include "body/error.hpp"
#include "body/oui.hpp"

using namespace body;

TEST(Oui, LookupByPrefix) {
    auto db = OuiDatabase::parse_csv(
        "prefix,vendor,device_class\n"
        "02:1a:10,Intelbras,camera\n"
        "02-1C-10,Dell,server\n");
    const auto* e = db.lookup(MacAddress::parse("02:1a:10:99:88:77"));
    ASSERT_TRUE(e);
    EXPECT_EQ(e->vendor, "Intelbras");
    EXPECT_EQ(e->device_class, DeviceClass::camera);
    EXPECT_EQ(e->prefix_str(), "02:1a:10");
    EXPECT_EQ(db.lookup(MacAddress::parse("02:1c:10:00:00:01"))->device_class, DeviceClass::server);
    EXPECT_FALSE(db.lookup(MacAddress::parse("02:ff:00:00:00:01")));
}

TEST(Oui, CsvRoundTrip) {
    OuiDatabase db({{0x021a10, "Intelbras", DeviceClass::camera}, {0x021b11, "HP Aruba", DeviceClass::switch_}});
    auto again = OuiDatabase::parse_csv(db.render_csv());
    EXPECT_EQ(again.entries(), db.entries());
}

TEST(Oui, MalformedRowsAreErrors) {
    EXPECT_THROW(OuiDatabase::parse_csv("prefix,vendor,device_class\n02:1a,X,camera\n"), MalformedLine);
    EXPECT_THROW(OuiDatabase::parse_csv("prefix,vendor,device_class\n02:1a:10,X,toaster\n"), MalformedLine);
}

TEST(Wattage, RangesAndRoundTrip) {
    auto table = WattageTable::parse_csv("model,min_w,max_w\nVIP-1230-B,3.0,5.5\n");
    const auto* r = table.find("VIP-1230-B");
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->contains(3.0));
    EXPECT_TRUE(r->contains(5.5));
    EXPECT_FALSE(r->contains(5.6));
    EXPECT_FALSE(table.find("other"));
    EXPECT_EQ(WattageTable::parse_csv(table.render_csv()).render_csv(), table.render_csv());
    EXPECT_THROW(WattageTable::parse_csv("model,min_w,max_w\nX,5.0,1.0\n"), MalformedLine);
}
