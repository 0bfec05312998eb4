#include "km/fsutil.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace km {

AtomicFile::AtomicFile(std::string path)
    : path_(std::move(path)), tmp_path_(path_ + ".tmp"), out_(tmp_path_, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + tmp_path_);
}

AtomicFile::~AtomicFile() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_path_, ec);
    }
}

void AtomicFile::commit() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + tmp_path_);
    out_.close();
    std::filesystem::rename(tmp_path_, path_);
    committed_ = true;
}

}  // namespace km
