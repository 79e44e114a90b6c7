#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

// Scratch directory helper for tests that touch the filesystem.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("hyprobe_test_" + tag + "_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::filesystem::path file(const std::string& name, const std::string& contents) const {
        auto p = path / name;
        std::ofstream out(p);
        out << contents;
        return p;
    }
};
