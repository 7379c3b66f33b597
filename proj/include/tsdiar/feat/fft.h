// tsdiar/feat/fft.h

// Copyright 2026  tsdiar contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSDIAR_FEAT_FFT_H_
#define TSDIAR_FEAT_FFT_H_

#include <complex>
#include <vector>

namespace tsdiar {

// In-place iterative radix-2 Cooley-Tukey. Size must be a power of two.
void Fft(std::vector<std::complex<double>> *data, bool inverse = false);

// Magnitude spectrum bins 0..n/2 of a real frame zero-padded to `n`.
std::vector<double> MagnitudeSpectrum(const std::vector<double> &frame, int n);

// Smallest power of two >= n.
int NextPowerOfTwo(int n);

}  // namespace tsdiar

#endif  // TSDIAR_FEAT_FFT_H_
