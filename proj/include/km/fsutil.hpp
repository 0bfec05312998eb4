#pragma once

#include <fstream>
#include <string>

namespace km {

/// Write-then-rename output file: the destination only ever appears complete.
/// The temporary is removed if commit() is never reached.
class AtomicFile {
public:
    explicit AtomicFile(std::string path);
    ~AtomicFile();
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ofstream& stream() { return out_; }
    void commit();

private:
    std::string path_;
    std::string tmp_path_;
    std::ofstream out_;
    bool committed_ = false;
};

}  // namespace km
