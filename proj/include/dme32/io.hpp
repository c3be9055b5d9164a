#pragma once

// plain-text serialization of parameters, keys, public keys and messages;
// writers emit a canonical form, parsers reject anything malformed with
// errc::parse

#include <string>

#include "dme32/dme.hpp"

namespace dme32 {

std::string format_params(const SystemParams& p);
SystemParams parse_params(const std::string& text);

std::string format_private_key(const PrivateKey& k, int w);
// returns the key; *w_out receives the header width
PrivateKey parse_private_key(const std::string& text, int* w_out = nullptr);

std::string format_public_key(const PublicKey& pk, int w);
PublicKey parse_public_key(const std::string& text, int* w_out = nullptr);

std::string format_message(const Vec6& m, int w);
Vec6 parse_message(const std::string& text, int w);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dme32
