#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dme32/attack.hpp"
#include "dme32/errors.hpp"
#include "dme32/io.hpp"
#include "dme32/malleability.hpp"

using namespace dme32;

namespace {

// exit codes: 0 ok, 2 malformed input or usage, 3 domain error, 4 failed verification
constexpr int kOk = 0;
constexpr int kParse = 2;
constexpr int kDomain = 3;
constexpr int kVerify = 4;

int code_for(const dme_error& e) {
  if (e.code == errc::parse) return kParse;
  if (e.code == errc::verification_failed || e.code == errc::search_exhausted) return kVerify;
  return kDomain;
}

System load_system(const std::string& path) {
  return System(parse_params(read_text_file(path)));
}

PrivateKey load_key(const std::string& path, const System& sys) {
  int w = 0;
  PrivateKey k = parse_private_key(read_text_file(path), &w);
  if (w != sys.w()) fail(errc::parse, "key width disagrees with the parameter file");
  return k;
}

PublicKey load_pub(const std::string& path, const System& sys) {
  int w = 0;
  PublicKey pk = parse_public_key(read_text_file(path), &w);
  if (w != sys.w()) fail(errc::parse, "public key width disagrees with the parameter file");
  return pk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DME-(3,2,q) workbench: key generation, encryption and key recovery"};
  app.require_subcommand(1);

  std::string params_path, key_path, pub_path, in_path, out_path, preset;
  std::vector<std::string> key_paths;
  std::uint64_t seed = 0;
  int width = 0, workers = 1;

  auto* gen = app.add_subcommand("gen-params", "generate system parameters");
  gen->add_option("--width", width, "base field width in bits (3..64)");
  auto* gen_seed = gen->add_option("--seed", seed, "parameter sampling seed");
  gen->add_option("--preset", preset, "named parameter set")
      ->check(CLI::IsMember({"nist"}));
  gen->add_option("--out", out_path, "output file")->required();

  auto* kg = app.add_subcommand("keygen", "generate a private key");
  kg->add_option("--params", params_path, "parameter file")->required();
  kg->add_option("--seed", seed, "key sampling seed")->required();
  kg->add_option("--out", out_path, "output file")->required();

  auto* pub = app.add_subcommand("pubkey", "derive the public key");
  pub->add_option("--params", params_path, "parameter file")->required();
  pub->add_option("--key", key_path, "private key file")->required();
  pub->add_option("--out", out_path, "output file")->required();

  auto* enc = app.add_subcommand("encrypt", "encrypt with the public key");
  enc->add_option("--params", params_path, "parameter file")->required();
  enc->add_option("--pub", pub_path, "public key file")->required();
  enc->add_option("--in", in_path, "plaintext file")->required();
  enc->add_option("--out", out_path, "output file")->required();

  auto* dec = app.add_subcommand("decrypt", "decrypt with the private key");
  dec->add_option("--params", params_path, "parameter file")->required();
  dec->add_option("--key", key_path, "private key file")->required();
  dec->add_option("--in", in_path, "ciphertext file")->required();
  dec->add_option("--out", out_path, "output file")->required();

  auto* atk = app.add_subcommand("attack", "recover a private key from the public key");
  atk->add_option("--params", params_path, "parameter file")->required();
  atk->add_option("--pub", pub_path, "public key file")->required();
  atk->add_option("--out", out_path, "recovered key output file")->required();
  atk->add_option("--workers", workers, "worker threads for the candidate search")
      ->check(CLI::PositiveNumber);

  auto* veq = app.add_subcommand("verify-equiv", "check two keys derive the same public key");
  veq->add_option("--params", params_path, "parameter file")->required();
  veq->add_option("--key", key_paths, "private key files (exactly two)")
      ->required()
      ->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  }

  try {
    if (gen->parsed()) {
      Preset p = preset == "nist" ? Preset::nist : Preset::none;
      if (p == Preset::nist && width == 0) width = 48;
      if (p == Preset::none && gen_seed->count() == 0) {
        std::cerr << "--seed is required without a preset\n";
        return kParse;
      }
      if (width == 0) {
        std::cerr << "--width is required without a preset\n";
        return kParse;
      }
      SystemParams sp = gen_system_params(width, seed, p);
      write_text_file(out_path, format_params(sp));
      return kOk;
    }
    if (kg->parsed()) {
      System sys = load_system(params_path);
      PrivateKey sk = keygen(sys, seed);
      write_text_file(out_path, format_private_key(sk, sys.w()));
      return kOk;
    }
    if (pub->parsed()) {
      System sys = load_system(params_path);
      PrivateKey sk = load_key(key_path, sys);
      PublicKey pk = derive_public_key(sk, sys);
      write_text_file(out_path, format_public_key(pk, sys.w()));
      return kOk;
    }
    if (enc->parsed()) {
      System sys = load_system(params_path);
      PublicKey pk = load_pub(pub_path, sys);
      Vec6 m = parse_message(read_text_file(in_path), sys.w());
      if ((m[0] | m[1]) == 0 || (m[2] | m[3]) == 0 || (m[4] | m[5]) == 0)
        fail(errc::zero_block, "plaintext blocks must be nonzero");
      Vec6 ct = eval_public(pk, sys, m);
      write_text_file(out_path, format_message(ct, sys.w()));
      return kOk;
    }
    if (dec->parsed()) {
      System sys = load_system(params_path);
      PrivateKey sk = load_key(key_path, sys);
      Vec6 ct = parse_message(read_text_file(in_path), sys.w());
      Vec6 m = decrypt(sk, sys, ct);
      write_text_file(out_path, format_message(m, sys.w()));
      return kOk;
    }
    if (atk->parsed()) {
      System sys = load_system(params_path);
      PublicKey pk = load_pub(pub_path, sys);
      auto [key, rep] = full_attack(pk, sys, workers);
      write_text_file(out_path, format_private_key(key, sys.w()));
      std::cerr << rep.summary();
      std::cout << "key=" << out_path << " " << rep.machine_line() << "\n";
      return kOk;
    }
    if (veq->parsed()) {
      System sys = load_system(params_path);
      PrivateKey a = load_key(key_paths[0], sys);
      PrivateKey b = load_key(key_paths[1], sys);
      if (same_public_key(a, b, sys)) {
        std::cout << "equivalent\n";
        return kOk;
      }
      std::cout << "not equivalent\n";
      return kVerify;
    }
  } catch (const dme_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code_for(e);
  }
  return kParse;
}
