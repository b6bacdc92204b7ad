#include "dtpt/app/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "dtpt/error.hpp"

namespace dtpt::app {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::io, "sha256 initialisation failed");
    std::array<char, 1 << 16> buf;
    while (is) {
        is.read(buf.data(), buf.size());
        if (is.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

void RunManifest::write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    j["tool"] = tool_version;
    j["command"] = command;
    j["configs"] = configs;
    j["assumptions"] = assumptions;
    j["warnings"] = warnings;
    auto& f = j["files"] = nlohmann::ordered_json::array();
    for (const auto& r : files) f.push_back({{"path", r.path}, {"sha256", r.sha256}, {"bytes", r.bytes}});
    auto& t = j["timings"] = nlohmann::ordered_json::array();
    for (const auto& s : timings) t.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
    j["clamp_events"] = clamp_events;
    j["threads"] = threads;
    j["wall_seconds"] = wall_seconds;
    os << j.dump(2) << '\n';
}

OutputSink::OutputSink(fs::path root, RunManifest& manifest) : m_root(std::move(root)), m_manifest(manifest) {}

void OutputSink::write(const fs::path& relative, const std::function<void(std::ostream&)>& body) {
    const fs::path path = m_root / relative;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::io, "cannot create '" + path.parent_path().string() + "': " + ec.message());
    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
        body(os);
        os.flush();
        if (!os) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
    }
    m_manifest.files.push_back({relative.generic_string(), sha256_file(path), fs::file_size(path)});
}

}  // namespace dtpt::app
