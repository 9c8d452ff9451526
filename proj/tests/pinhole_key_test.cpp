#include "sipgrey/pinhole_key.hpp"

#include <cctype>
#include <set>

#include "doctest.h"

using namespace sipgrey;

namespace {

SipMessage fixture() {
    SipMessage m;
    m.kind = MessageKind::Request;
    m.method = SipMethod::Invite;
    m.method_token = "INVITE";
    m.cseq_method = "INVITE";
    m.cseq_number = 3;
    m.call_id = "call-7";
    m.via_branch = "z9hG4bKabc";
    m.from_tag = "tag-1";
    m.src = {0x0a010203, 5060};
    m.dst = {0xc0a8380a, 5060};
    return m;
}

}  // namespace

TEST_CASE("key derivation picks the right fields") {
    SipMessage m = fixture();

    PinholeKey by_ip = derive_key(m, KeyStrategy::SourceIp);
    REQUIRE(std::holds_alternative<SourceIpKey>(by_ip));
    CHECK(std::get<SourceIpKey>(by_ip).ip == 0x0a010203);

    PinholeKey by_txn = derive_key(m, KeyStrategy::Transaction);
    REQUIRE(std::holds_alternative<TransactionKey>(by_txn));
    CHECK(std::get<TransactionKey>(by_txn).ip == 0x0a010203);
    CHECK(std::get<TransactionKey>(by_txn).branch == "z9hG4bKabc");
    CHECK(std::get<TransactionKey>(by_txn).cseq_method == "INVITE");

    PinholeKey by_session = derive_key(m, KeyStrategy::Session);
    REQUIRE(std::holds_alternative<SessionKey>(by_session));
    CHECK(std::get<SessionKey>(by_session).call_id == "call-7");
    CHECK(std::get<SessionKey>(by_session).from_tag == "tag-1");
}

TEST_CASE("retransmission maps to the same key, different sender does not") {
    SipMessage a = fixture();
    SipMessage retransmit = a;
    for (auto strategy :
         {KeyStrategy::SourceIp, KeyStrategy::Transaction, KeyStrategy::Session})
        CHECK(derive_key(a, strategy) == derive_key(retransmit, strategy));

    SipMessage spoofed = a;
    spoofed.src.ip += 1;
    CHECK(derive_key(a, KeyStrategy::SourceIp) != derive_key(spoofed, KeyStrategy::SourceIp));
    CHECK(derive_key(a, KeyStrategy::Transaction) !=
          derive_key(spoofed, KeyStrategy::Transaction));
    // session keys ignore the network source on purpose
    CHECK(derive_key(a, KeyStrategy::Session) == derive_key(spoofed, KeyStrategy::Session));
}

TEST_CASE("digest is 16 hex chars and tracks equality") {
    SipMessage m = fixture();
    for (auto strategy :
         {KeyStrategy::SourceIp, KeyStrategy::Transaction, KeyStrategy::Session}) {
        PinholeKey key = derive_key(m, strategy);
        std::string digest = key_digest(key);
        CHECK(digest.size() == 16);
        for (char c : digest) CHECK(std::isxdigit(static_cast<unsigned char>(c)));
        CHECK(key_digest(key) == digest);
        CHECK(key_hash(key) == PinholeKeyHash{}(key));
    }
}

TEST_CASE("field boundaries stay distinct in the hash") {
    PinholeKey a = TransactionKey{1, "ab", "c"};
    PinholeKey b = TransactionKey{1, "a", "bc"};
    CHECK(key_hash(a) != key_hash(b));

    PinholeKey c = SessionKey{"ab", "c"};
    PinholeKey d = SessionKey{"a", "bc"};
    CHECK(key_hash(c) != key_hash(d));

    // same bytes under different variants
    PinholeKey e = SourceIpKey{0};
    PinholeKey f = SessionKey{"", ""};
    CHECK(key_hash(e) != key_hash(f));
}

TEST_CASE("digests rarely collide across distinct keys") {
    std::set<std::string> digests;
    int keys = 0;
    for (std::uint32_t ip = 0; ip < 300; ++ip) {
        digests.insert(key_digest(SourceIpKey{ip}));
        ++keys;
    }
    for (int i = 0; i < 300; ++i) {
        digests.insert(key_digest(SessionKey{"call" + std::to_string(i), "t"}));
        ++keys;
    }
    CHECK(static_cast<int>(digests.size()) == keys);
}
