// Copyright 2026 The noon-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// noon-forge: regenerates the NOON-circuit datasets from the command line.
//
//   noon-forge dist --na 35 --nb 35 --m1 22 --m2 8 --m9 18 --T auto --set 789 --out fig4.csv
//   noon-forge table-quality --n 140 --rows "45,5;40,10;35,15;30,20;25,25"
//   noon-forge table-minn --n 60
//   noon-forge efficiency --n 60 --m78 20 --mode corrected --out avg.csv
//   noon-forge fringes --na 80 --nb 80 --m1 40 --m2 40 --out fringes.csv
//   noon-forge estimate --chi 0.1 --t 100 --nu 50 --seed 7 --out est.json
//   noon-forge selftest

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char **argv) { return noon::cli::run(argc, argv); }
