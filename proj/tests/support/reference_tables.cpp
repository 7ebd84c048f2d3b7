#include "reference_tables.hpp"

#include "cbench/error.hpp"

namespace cbench::testsupport {

// Transcribed once; the fixture CSVs under fixtures/grids are generated from
// these rows and the robustness rows act as the independent cross-check.

const std::vector<AccuracyRow>& reference_accuracy_rows() {
    static const std::vector<AccuracyRow> rows = {
        // cell microscopy
        {"medimeta_c", "cell_microscopy", "clip", 17.81, {17.58, 17.96, 20.09, 17.20, 19.30, 18.84, 17.94}, 18.42},
        {"medimeta_c", "cell_microscopy", "medclip", 13.75, {14.02, 14.25, 9.68, 11.54, 14.26, 12.02, 13.99}, 12.82},
        {"medimeta_c", "cell_microscopy", "biomedclip", 8.60, {8.32, 6.49, 8.60, 8.68, 8.55, 8.53, 8.80}, 8.28},
        {"medimeta_c", "cell_microscopy", "unimedclip", 11.61, {10.46, 12.56, 15.89, 15.45, 16.23, 14.99, 17.56}, 14.74},
        {"medimeta_c", "cell_microscopy", "rmedclip", 80.05, {32.30, 19.06, 43.95, 64.11, 67.60, 47.98, 24.10}, 42.73},
        {"medmnist_c", "cell_microscopy", "clip", 11.11, {8.65, 9.12, 9.98, 9.83, 13.31, 23.41, 10.38}, 12.10},
        {"medmnist_c", "cell_microscopy", "medclip", 10.55, {15.78, 14.55, 12.30, 10.47, 12.24, 13.13, 16.78}, 13.61},
        {"medmnist_c", "cell_microscopy", "biomedclip", 22.71, {18.35, 15.74, 24.03, 21.74, 23.89, 18.98, 25.48}, 21.17},
        {"medmnist_c", "cell_microscopy", "unimedclip", 16.98, {16.92, 16.93, 16.42, 13.29, 17.15, 13.69, 15.21}, 15.66},
        {"medmnist_c", "cell_microscopy", "rmedclip", 70.07, {51.29, 50.11, 62.09, 53.78, 64.69, 50.69, 56.81}, 55.64},
        // breast imaging
        {"medimeta_c", "breast_imaging", "clip", 41.10, {43.80, 40.25, 40.00, 39.88, 39.82, 46.32, 45.09}, 42.16},
        {"medimeta_c", "breast_imaging", "medclip", 53.99, {55.09, 53.01, 59.63, 57.91, 54.29, 60.12, 60.25}, 57.19},
        {"medimeta_c", "breast_imaging", "biomedclip", 46.93, {59.88, 61.78, 40.18, 44.48, 42.64, 48.34, 43.19}, 48.64},
        {"medimeta_c", "breast_imaging", "unimedclip", 39.57, {39.57, 39.57, 39.57, 39.57, 39.57, 39.57, 39.57}, 39.57},
        {"medimeta_c", "breast_imaging", "rmedclip", 60.74, {60.67, 60.43, 60.80, 60.67, 60.61, 59.82, 61.47}, 60.64},
        {"medmnist_c", "breast_imaging", "clip", 66.03, {64.36, 48.59, 64.62, 51.67, 69.74, 55.90, 37.82}, 56.10},
        {"medmnist_c", "breast_imaging", "medclip", 56.41, {50.00, 41.67, 74.62, 60.38, 54.87, 57.69, 58.59}, 56.83},
        {"medmnist_c", "breast_imaging", "biomedclip", 73.08, {73.08, 70.00, 70.64, 72.95, 72.82, 73.08, 69.36}, 71.70},
        {"medmnist_c", "breast_imaging", "unimedclip", 73.08, {73.08, 73.08, 73.08, 73.08, 73.08, 73.08, 73.08}, 73.08},
        {"medmnist_c", "breast_imaging", "rmedclip", 74.36, {75.77, 48.85, 74.74, 53.85, 74.87, 64.10, 67.69}, 65.70},
        // chest x-ray
        {"medimeta_c", "chest_xray", "clip", 37.50, {37.95, 33.75, 37.50, 37.40, 37.47, 37.66, 37.02}, 36.96},
        {"medimeta_c", "chest_xray", "medclip", 41.03, {35.03, 36.73, 37.18, 40.77, 40.80, 40.16, 39.90}, 38.65},
        {"medimeta_c", "chest_xray", "biomedclip", 37.50, {37.50, 37.72, 37.50, 37.50, 37.50, 38.27, 39.81}, 37.97},
        {"medimeta_c", "chest_xray", "unimedclip", 37.50, {37.50, 37.50, 39.17, 41.31, 37.50, 36.67, 40.45}, 38.59},
        {"medimeta_c", "chest_xray", "rmedclip", 60.90, {43.01, 43.01, 59.07, 63.24, 53.27, 47.40, 46.54}, 50.79},
        {"medmnist_c", "chest_xray", "clip", 56.25, {47.47, 41.09, 52.85, 41.15, 55.10, 59.62, 38.91}, 48.03},
        {"medmnist_c", "chest_xray", "medclip", 80.13, {52.82, 51.57, 48.49, 50.32, 78.72, 54.29, 37.88}, 53.44},
        {"medmnist_c", "chest_xray", "biomedclip", 52.56, {38.43, 37.72, 38.53, 39.20, 53.85, 42.56, 38.04}, 41.19},
        {"medmnist_c", "chest_xray", "unimedclip", 37.66, {37.44, 37.50, 42.50, 51.83, 37.76, 50.83, 63.69}, 45.93},
        {"medmnist_c", "chest_xray", "rmedclip", 87.02, {40.83, 37.79, 79.26, 86.31, 88.08, 73.49, 69.97}, 67.96},
        // fundoscopy
        {"medimeta_c", "fundoscopy", "clip", 78.28, {78.62, 78.94, 78.94, 78.78, 78.38, 78.81, 79.03}, 78.79},
        {"medimeta_c", "fundoscopy", "medclip", 54.06, {44.56, 23.38, 72.69, 50.31, 41.41, 65.81, 64.97}, 51.88},
        {"medimeta_c", "fundoscopy", "biomedclip", 20.94, {20.97, 20.94, 20.94, 20.94, 20.94, 21.59, 20.94}, 21.04},
        {"medimeta_c", "fundoscopy", "unimedclip", 78.91, {79.03, 79.06, 78.78, 78.75, 78.69, 79.03, 77.69}, 78.72},
        {"medimeta_c", "fundoscopy", "rmedclip", 79.38, {76.50, 46.59, 78.78, 73.50, 79.06, 72.34, 74.41}, 71.60},
        {"medmnist_c", "fundoscopy", "clip", 31.00, {39.50, 35.95, 34.75, 36.35, 36.10, 28.00, 38.10}, 35.54},
        {"medmnist_c", "fundoscopy", "medclip", 29.75, {11.60, 18.35, 8.00, 18.90, 27.65, 36.10, 29.05}, 21.38},
        {"medmnist_c", "fundoscopy", "biomedclip", 18.00, {18.30, 16.90, 21.20, 22.60, 18.45, 28.85, 24.30}, 21.51},
        {"medmnist_c", "fundoscopy", "unimedclip", 18.25, {17.00, 17.55, 17.55, 18.00, 23.85, 18.70, 17.00}, 18.52},
        {"medmnist_c", "fundoscopy", "rmedclip", 12.75, {13.20, 11.50, 11.50, 11.45, 21.70, 17.85, 11.65}, 14.12},
        // retinal oct
        {"medimeta_c", "retinal_oct", "clip", 24.30, {26.26, 24.98, 24.84, 24.58, 23.02, 24.70, 25.94}, 24.90},
        {"medimeta_c", "retinal_oct", "medclip", 36.70, {27.84, 26.60, 27.98, 27.80, 36.08, 30.16, 28.60}, 29.29},
        {"medimeta_c", "retinal_oct", "biomedclip", 20.70, {21.52, 21.90, 24.34, 21.88, 20.10, 21.90, 23.16}, 22.11},
        {"medimeta_c", "retinal_oct", "unimedclip", 24.70, {22.84, 25.84, 24.76, 25.66, 25.24, 25.34, 25.08}, 24.97},
        {"medimeta_c", "retinal_oct", "rmedclip", 67.70, {63.46, 46.48, 54.82, 42.92, 49.92, 51.20, 28.34}, 48.16},
        {"medmnist_c", "retinal_oct", "clip", 25.90, {22.72, 27.24, 28.26, 28.52, 25.98, 25.74, 25.02}, 26.21},
        {"medmnist_c", "retinal_oct", "medclip", 14.90, {20.48, 21.40, 5.68, 14.18, 16.86, 21.76, 22.68}, 17.58},
        {"medmnist_c", "retinal_oct", "biomedclip", 25.50, {25.58, 26.88, 26.74, 29.64, 25.82, 29.64, 27.54}, 27.41},
        {"medmnist_c", "retinal_oct", "unimedclip", 42.10, {41.06, 33.42, 34.58, 34.68, 45.32, 30.16, 32.16}, 35.91},
        {"medmnist_c", "retinal_oct", "rmedclip", 46.50, {47.52, 39.44, 64.94, 45.20, 65.90, 59.68, 30.54}, 50.46},
    };
    return rows;
}

const std::vector<RobustnessRow>& reference_robustness_rows() {
    static const std::vector<RobustnessRow> rows = {
        // cell microscopy
        {"medimeta_c", "cell_microscopy", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medimeta_c", "cell_microscopy", "medclip", 104.9, {104.3, 104.5, 113.0, 106.8, 106.3, 108.4, 104.8}, 106.9},
        {"medimeta_c", "cell_microscopy", "biomedclip", 111.2, {111.2, 114.0, 114.4, 110.3, 113.3, 112.7, 111.1}, 112.4},
        {"medimeta_c", "cell_microscopy", "unimedclip", 107.5, {108.6, 106.6, 105.3, 102.1, 103.8, 104.7, 100.5}, 104.5},
        {"medimeta_c", "cell_microscopy", "rmedclip", 24.3, {82.1, 98.7, 70.1, 43.3, 40.1, 64.1, 92.5}, 70.1},
        {"medmnist_c", "cell_microscopy", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medmnist_c", "cell_microscopy", "medclip", 100.6, {92.2, 94.0, 97.4, 99.3, 101.2, 113.4, 92.9}, 98.6},
        {"medmnist_c", "cell_microscopy", "biomedclip", 86.9, {89.4, 92.7, 84.4, 86.8, 87.8, 105.8, 83.1}, 90.0},
        {"medmnist_c", "cell_microscopy", "unimedclip", 93.4, {90.9, 91.4, 92.8, 96.2, 95.6, 112.7, 94.6}, 96.3},
        {"medmnist_c", "cell_microscopy", "rmedclip", 33.7, {53.3, 54.9, 42.1, 51.3, 40.7, 64.4, 48.2}, 50.7},
        // breast imaging
        {"medimeta_c", "breast_imaging", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medimeta_c", "breast_imaging", "medclip", 78.1, {79.9, 78.6, 67.3, 70.0, 75.9, 74.3, 72.4}, 74.1},
        {"medimeta_c", "breast_imaging", "biomedclip", 90.1, {71.4, 64.0, 99.7, 92.3, 95.3, 96.2, 103.5}, 88.9},
        {"medimeta_c", "breast_imaging", "unimedclip", 102.6, {107.5, 101.1, 100.7, 100.5, 100.4, 112.6, 110.1}, 104.7},
        {"medimeta_c", "breast_imaging", "rmedclip", 66.7, {70.0, 66.2, 65.3, 65.4, 65.4, 74.9, 70.2}, 68.2},
        {"medmnist_c", "breast_imaging", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medmnist_c", "breast_imaging", "medclip", 128.3, {140.3, 113.5, 71.7, 82.0, 149.2, 95.9, 66.6}, 102.7},
        {"medmnist_c", "breast_imaging", "biomedclip", 79.2, {75.5, 58.4, 83.0, 56.0, 89.8, 61.0, 49.3}, 67.6},
        {"medmnist_c", "breast_imaging", "unimedclip", 79.2, {75.5, 52.4, 76.1, 55.7, 89.0, 61.0, 43.3}, 64.7},
        {"medmnist_c", "breast_imaging", "rmedclip", 75.5, {68.0, 99.5, 71.4, 95.5, 83.1, 81.4, 52.0}, 78.7},
        // chest x-ray
        {"medimeta_c", "chest_xray", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medimeta_c", "chest_xray", "medclip", 94.4, {104.7, 95.5, 100.5, 94.6, 94.7, 96.0, 95.4}, 97.3},
        {"medimeta_c", "chest_xray", "biomedclip", 100.0, {100.7, 94.0, 100.0, 99.8, 99.9, 99.0, 95.6}, 98.4},
        {"medimeta_c", "chest_xray", "unimedclip", 100.0, {100.7, 94.3, 97.3, 93.8, 99.9, 101.6, 94.6}, 97.5},
        {"medimeta_c", "chest_xray", "rmedclip", 62.6, {91.8, 86.0, 65.5, 58.7, 74.7, 84.4, 84.9}, 78.0},
        {"medmnist_c", "chest_xray", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medmnist_c", "chest_xray", "medclip", 45.4, {89.8, 82.2, 109.2, 84.4, 47.4, 113.2, 101.7}, 89.7},
        {"medmnist_c", "chest_xray", "biomedclip", 108.4, {117.2, 105.7, 130.4, 103.3, 102.8, 142.2, 101.4}, 114.7},
        {"medmnist_c", "chest_xray", "unimedclip", 142.5, {119.1, 106.1, 122.0, 81.9, 138.6, 121.7, 59.4}, 107.0},
        {"medmnist_c", "chest_xray", "rmedclip", 29.7, {112.6, 105.6, 44.0, 23.3, 26.6, 65.6, 49.2}, 61.0},
        // fundoscopy
        {"medimeta_c", "fundoscopy", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medimeta_c", "fundoscopy", "medclip", 211.5, {259.4, 363.8, 129.7, 234.2, 271.0, 161.4, 167.1}, 226.6},
        {"medimeta_c", "fundoscopy", "biomedclip", 364.0, {369.7, 375.4, 375.4, 372.6, 365.6, 370.1, 377.0}, 372.3},
        {"medimeta_c", "fundoscopy", "unimedclip", 97.1, {98.1, 99.4, 100.7, 100.1, 98.6, 99.0, 106.4}, 100.3},
        {"medimeta_c", "fundoscopy", "rmedclip", 95.0, {109.9, 253.6, 100.7, 124.9, 96.8, 130.5, 122.1}, 134.1},
        {"medmnist_c", "fundoscopy", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medmnist_c", "fundoscopy", "medclip", 101.8, {146.1, 127.5, 141.0, 127.4, 113.2, 88.8, 114.6}, 122.7},
        {"medmnist_c", "fundoscopy", "biomedclip", 118.8, {135.0, 129.7, 120.8, 121.6, 127.6, 98.8, 122.3}, 122.3},
        {"medmnist_c", "fundoscopy", "unimedclip", 118.5, {137.2, 128.7, 126.4, 128.8, 119.2, 112.9, 134.1}, 126.8},
        {"medmnist_c", "fundoscopy", "rmedclip", 126.4, {143.5, 138.2, 135.6, 139.1, 122.5, 114.1, 142.7}, 133.7},
        // retinal oct
        {"medimeta_c", "retinal_oct", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medimeta_c", "retinal_oct", "medclip", 83.6, {97.9, 97.8, 95.8, 95.7, 83.0, 92.7, 96.4}, 94.2},
        {"medimeta_c", "retinal_oct", "biomedclip", 104.8, {106.4, 104.1, 100.7, 103.6, 103.8, 103.7, 103.8}, 103.7},
        {"medimeta_c", "retinal_oct", "unimedclip", 99.5, {104.6, 98.9, 100.1, 98.6, 97.1, 99.2, 101.2}, 99.9},
        {"medimeta_c", "retinal_oct", "rmedclip", 42.7, {49.6, 71.3, 60.1, 75.7, 65.1, 64.8, 96.8}, 69.0},
        {"medmnist_c", "retinal_oct", "clip", 100.0, {100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0}, 100.0},
        {"medmnist_c", "retinal_oct", "medclip", 114.8, {102.9, 108.0, 131.5, 120.1, 112.3, 105.4, 103.1}, 111.9},
        {"medmnist_c", "retinal_oct", "biomedclip", 100.5, {96.3, 100.5, 102.1, 98.4, 100.2, 94.7, 96.6}, 98.4},
        {"medmnist_c", "retinal_oct", "unimedclip", 78.1, {76.3, 91.5, 91.2, 91.4, 73.9, 94.0, 90.5}, 87.0},
        {"medmnist_c", "retinal_oct", "rmedclip", 72.2, {67.9, 83.2, 48.9, 76.7, 46.1, 54.3, 92.6}, 67.1},
    };
    return rows;
}

AccuracyGrid grid_from_row(const AccuracyRow& row) {
    AccuracyGrid grid;
    grid.model_id = row.model;
    grid.dataset_id = std::string(row.benchmark) + "/" + row.modality;
    grid.clean_acc = row.clean / 100.0;
    for (std::size_t k = 0; k < kBenchmarkKinds.size(); ++k) {
        std::array<double, 5> cells;
        cells.fill(row.acc[k] / 100.0);
        grid.cells[kBenchmarkKinds[k]] = cells;
    }
    return grid;
}

const AccuracyRow& find_accuracy_row(const std::string& benchmark,
                                     const std::string& modality,
                                     const std::string& model) {
    for (const auto& row : reference_accuracy_rows())
        if (benchmark == row.benchmark && modality == row.modality && model == row.model)
            return row;
    throw DataError("no reference row for " + benchmark + "/" + modality + "/" + model);
}

} // namespace cbench::testsupport
