#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gmmrec/errors.hpp"
#include "gmmrec/format.hpp"
#include "gmmrec/io.hpp"

namespace gmmrec {
namespace {

static_assert(std::endian::native == std::endian::little, "dataset I/O assumes a little-endian host");

using Code = DatasetFormatError::Code;

std::string header_text(const Dataset& d) {
    std::string h;
    h += "n=" + std::to_string(d.n()) + "\n";
    h += "p=" + std::to_string(d.p()) + "\n";
    h += "sigma=" + format_g17(d.config.sigma) + "\n";
    h += "delta=" + format_g17(d.config.delta) + "\n";
    h += "seed=" + std::to_string(d.seed) + "\n";
    if (d.mode.tag == CenterMode::Tag::FixedNorm)
        h += "mode=fixed_norm\n";
    else
        h += "mode=gaussian_prior:" + format_g17(d.mode.alpha) + "\n";
    return h;
}

class Reader {
public:
    explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

    void read(void* dst, std::size_t len, const char* what) {
        if (bytes_.size() - pos_ < len)
            throw DatasetFormatError(Code::Truncated, std::string("dataset truncated while reading ") + what);
        std::memcpy(dst, bytes_.data() + pos_, len);
        pos_ += len;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::string bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetFormatError(Code::Io, "cannot open " + path.string() + " for writing");
    const std::string header = header_text(data);
    const auto len = static_cast<std::uint32_t>(header.size());
    out.write(kDatasetMagic, sizeof kDatasetMagic);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(data.theta.data()),
              static_cast<std::streamsize>(data.theta.size() * sizeof(double)));
    for (std::size_t i = 0; i < data.eta.size(); ++i) out.put(static_cast<char>(data.eta[i]));
    const auto y = data.y.data();
    out.write(reinterpret_cast<const char*>(y.data()), static_cast<std::streamsize>(y.size_bytes()));
    if (!out) throw DatasetFormatError(Code::Io, "write to " + path.string() + " failed");
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetFormatError(Code::Io, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    Reader r(buffer.str());

    char magic[8];
    r.read(magic, sizeof magic, "magic");
    if (std::memcmp(magic, kDatasetMagic, sizeof magic) != 0)
        throw DatasetFormatError(Code::BadMagic, path.string() + " is not a dataset file (bad magic)");

    std::uint32_t len = 0;
    r.read(&len, sizeof len, "header length");
    std::string header(len, '\0');
    r.read(header.data(), len, "header");

    Dataset d;
    std::int64_t n = -1;
    std::int64_t p = -1;
    bool have_sigma = false, have_delta = false, have_seed = false, have_mode = false;
    std::istringstream lines(header);
    std::string line;
    try {
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw DatasetFormatError(Code::HeaderParse, "header line without '=': " + line);
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (key == "n") n = parse_int(value);
            else if (key == "p") p = parse_int(value);
            else if (key == "sigma") { d.config.sigma = parse_double(value); have_sigma = true; }
            else if (key == "delta") { d.config.delta = parse_double(value); have_delta = true; }
            else if (key == "seed") { d.seed = parse_uint(value); have_seed = true; }
            else if (key == "mode") {
                if (value == "fixed_norm") {
                    d.mode = CenterMode::fixed_norm();
                } else if (value.rfind("gaussian_prior:", 0) == 0) {
                    d.mode = CenterMode::gaussian_prior(parse_double(value.substr(15)));
                } else {
                    throw DatasetFormatError(Code::HeaderParse, "unknown center mode '" + value + "'");
                }
                have_mode = true;
            } else {
                throw DatasetFormatError(Code::HeaderParse, "unknown header key '" + key + "'");
            }
        }
    } catch (const DomainError& e) {
        throw DatasetFormatError(Code::HeaderParse, std::string("header: ") + e.what());
    }
    if (n < 0 || p < 0 || !have_sigma || !have_delta || !have_seed || !have_mode)
        throw DatasetFormatError(Code::HeaderParse, "header is missing required keys");
    if (n < 2) throw DatasetFormatError(Code::Validation, "header n must be >= 2, got " + std::to_string(n));
    if (p < 1) throw DatasetFormatError(Code::Validation, "header p must be >= 1, got " + std::to_string(p));
    if (!(d.config.sigma >= 0.0) || !(d.config.delta > 0.0))
        throw DatasetFormatError(Code::Validation, "header sigma must be >= 0 and delta > 0");
    d.config.n = n;
    d.config.p = p;

    const auto pn = static_cast<std::size_t>(p);
    const auto nn = static_cast<std::size_t>(n);
    const std::size_t expected = pn * 8 + nn + pn * nn * 8;
    if (r.remaining() < expected) throw DatasetFormatError(Code::Truncated, "dataset body truncated");

    d.theta.resize(pn);
    r.read(d.theta.data(), pn * sizeof(double), "theta");
    std::vector<std::int8_t> eta(nn);
    r.read(eta.data(), nn, "eta");
    try {
        d.eta = LabelVector(std::move(eta));
    } catch (const DomainError& e) {
        throw DatasetFormatError(Code::Validation, std::string("labels: ") + e.what());
    }
    std::vector<double> y(pn * nn);
    r.read(y.data(), y.size() * sizeof(double), "Y");
    d.y = Matrix(pn, nn, std::move(y));
    if (r.remaining() != 0) throw DatasetFormatError(Code::Validation, "trailing bytes after Y");
    return d;
}

}  // namespace gmmrec
