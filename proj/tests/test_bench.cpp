#include "hdqf/bench/experiments.hpp"

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace hdqf;
using namespace hdqf::bench;

namespace {

// Two-sided Student t tail by Simpson integration of the density.
double t_two_sided(double t, double df) {
  const double c = std::tgamma((df + 1) / 2) / (std::sqrt(df * std::numbers::pi) * std::tgamma(df / 2));
  auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double a = 0.0, b = std::abs(t);
  const int n = 20000;
  const double h = (b - a) / n;
  double s = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * pdf(a + i * h);
  return 1.0 - 2.0 * (s * h / 3);
}

std::size_t count_tag(const boost::property_tree::ptree& t, const std::string& tag) {
  std::size_t n = 0;
  for (const auto& [k, child] : t) {
    if (k == tag) ++n;
    n += count_tag(child, tag);
  }
  return n;
}

boost::property_tree::ptree parse_xml(const std::string& text) {
  std::istringstream is(text);
  boost::property_tree::ptree t;
  boost::property_tree::read_xml(is, t);
  return t;
}

}  // namespace

TEST(Stats, LineFitsExactData) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);

  std::vector<double> p;
  for (double v : x) p.push_back(3 * std::pow(v, 1.5));
  EXPECT_NEAR(fit_loglog(x, p).slope, 1.5, 1e-12);

  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
  EXPECT_THROW(fit_line(std::vector<double>{2, 2}, std::vector<double>{1, 3}), std::invalid_argument);
  EXPECT_THROW(fit_loglog(std::vector<double>{0, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Stats, RanksMedianMean) {
  const auto r = average_ranks(std::vector<double>{10, 30, 20, 20});
  EXPECT_EQ(r, (std::vector<double>{1, 4, 2.5, 2.5}));
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_DOUBLE_EQ(mean(std::vector<double>{1, 2, 6}), 3.0);
  EXPECT_THROW(median({}), std::invalid_argument);
}

TEST(Stats, SpearmanExactSmallSample) {
  // Permutations of 5 with sum d^2 <= 4: identity, 4 adjacent swaps, 3 disjoint pairs.
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 1, 4, 3, 5};
  const auto s = spearman(x, y);
  EXPECT_TRUE(s.exact);
  EXPECT_NEAR(s.rho, 0.8, 1e-12);
  EXPECT_NEAR(s.p_value, 16.0 / 120.0, 1e-12);

  const auto m = spearman(x, std::vector<double>{50, 40, 30, 20, 10});
  EXPECT_NEAR(m.rho, -1.0, 1e-12);
  EXPECT_NEAR(m.p_value, 2.0 / 120.0, 1e-12);
}

TEST(Stats, SpearmanLargeSampleMatchesTDistribution) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  const std::vector<double> y{3, 1, 2, 6, 4, 5, 9, 12, 7, 8, 11, 10};
  const auto s = spearman(x, y);
  EXPECT_FALSE(s.exact);
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  const double n = 12;
  const double rho = 1 - 6 * d2 / (n * (n * n - 1));
  EXPECT_NEAR(s.rho, rho, 1e-12);
  const double t = rho * std::sqrt((n - 2) / (1 - rho * rho));
  EXPECT_NEAR(s.p_value, t_two_sided(t, n - 2), 1e-6);
}

TEST(Csv, FormatNumberRoundTrips) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(std::size_t{42}), "42");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  CounterRng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(static_cast<double>(rng()), -static_cast<int>(rng.below(120)));
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Csv, WriterBytesAreExact) {
  std::ostringstream os;
  CsvWriter w(os, {"name", "value"});
  w.row({"a,b", "say \"hi\""});
  w.row({"line\nbreak", "1"});
  EXPECT_EQ(os.str(), "name,value\r\n\"a,b\",\"say \"\"hi\"\"\"\r\n\"line\nbreak\",1\r\n");
  EXPECT_THROW(w.row({"only one"}), std::invalid_argument);
  EXPECT_THROW(CsvWriter(os, {}), std::invalid_argument);
}

TEST(Csv, RandomRoundTrip) {
  const std::string alphabet = "ab,\"\r\n x1";
  CounterRng rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t cols = 1 + rng.below(4);
    std::vector<std::string> header;
    for (std::size_t c = 0; c < cols; ++c) header.push_back("c" + std::to_string(c));
    std::vector<std::vector<std::string>> rows(1 + rng.below(5));
    for (auto& r : rows) {
      for (std::size_t c = 0; c < cols; ++c) {
        std::string f;
        for (std::size_t k = rng.below(6); k > 0; --k) f += alphabet[rng.below(alphabet.size())];
        r.push_back(f);
      }
    }
    std::istringstream is(csv_text(header, rows));
    const auto back = read_csv(is);
    ASSERT_EQ(back.size(), rows.size() + 1);
    EXPECT_EQ(back[0], header);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(back[i + 1], rows[i]);
  }
}

TEST(Csv, ReaderErrors) {
  std::istringstream open("a,\"b\r\n");
  EXPECT_THROW(read_csv(open), std::runtime_error);
  std::istringstream stray("a,b\"c\r\n");
  EXPECT_THROW(read_csv(stray), std::runtime_error);
  std::istringstream lf("x,y\n1,2");
  EXPECT_EQ(read_csv(lf), (std::vector<std::vector<std::string>>{{"x", "y"}, {"1", "2"}}));
}

TEST(Svg, PlotIsWellFormedXml) {
  Plot p;
  p.title = "P <&> \"q\"";
  p.xlabel = "x";
  p.ylabel = "y";
  p.logy = true;
  p.series.push_back({"a & b", {1, 2, 3}, {1, 10, 100}, true, true, false});
  p.series.push_back({"c", {1, 2, 3}, {0, 5, 50}, true, false, true});
  const auto text = render_svg(p);
  const auto tree = parse_xml(text);
  EXPECT_EQ(tree.get<std::string>("svg.<xmlattr>.xmlns"), "http://www.w3.org/2000/svg");
  EXPECT_EQ(count_tag(tree, "polyline"), 2u);
  EXPECT_EQ(count_tag(tree, "circle"), 3u);
  EXPECT_NE(text.find("P &lt;&amp;&gt; &quot;q&quot;"), std::string::npos);
  EXPECT_EQ(render_svg(p), text);

  p.series.push_back({"bad", {1, 2}, {1}, true, false, false});
  EXPECT_THROW(render_svg(p), std::invalid_argument);
}

TEST(Svg, BitmapGridDrawsInkRuns) {
  BitmapPanel a{"a", 2, 4, {1, 1, 0, 1, 0, 0, 0, 0}};
  BitmapPanel b{"b", 2, 4, {1, 1, 1, 1, 1, 0, 1, 0}};
  const auto text = render_bitmap_grid("grid", {"row"}, {{a, b}});
  const auto tree = parse_xml(text);
  // background + 2 frames + 2 runs in a + 3 runs in b
  EXPECT_EQ(count_tag(tree, "rect"), 1u + 2u + 2u + 3u);
  EXPECT_THROW(render_bitmap_grid("g", {}, {{a}}), std::invalid_argument);
}

TEST(Images, GlyphsAreDeterministicAndDistinct) {
  const auto g = builtin_glyphs(kGlyphCount, 24);
  ASSERT_EQ(g.size(), kGlyphCount);
  EXPECT_EQ(g, builtin_glyphs(kGlyphCount, 24));
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NO_THROW(g[i].validate());
    EXPECT_EQ(g[i].height, 24u);
    std::size_t ink = 0;
    for (auto p : g[i].pixels) ink += p;
    EXPECT_GT(ink, 0u);
    EXPECT_LT(ink, g[i].size());
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(g[i], g[j]);
  }
  EXPECT_THROW(builtin_glyphs(0), std::invalid_argument);
  EXPECT_THROW(builtin_glyphs(9), std::invalid_argument);
  EXPECT_THROW(builtin_glyphs(2, 7), std::invalid_argument);
  EXPECT_EQ(load_images("builtin:3", 16).size(), 3u);
}

TEST(Images, PbmRoundTripAndErrors) {
  for (const auto& img : builtin_glyphs(4, 10)) {
    std::stringstream ss;
    write_pbm(ss, img);
    EXPECT_EQ(read_pbm(ss), img);
  }
  std::istringstream commented("P1\n# note\n3 2\n1 0 1\n0 1 0\n");
  const auto img = read_pbm(commented);
  EXPECT_EQ(img.width, 3u);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0}));
  std::istringstream packed("P1 2 2 1001");
  EXPECT_EQ(read_pbm(packed).pixels, (std::vector<std::uint8_t>{1, 0, 0, 1}));

  for (const char* bad : {"P4\n1 1\n1", "P1\nx 1\n1", "P1\n0 1\n", "P1\n2 1\n1 2", "P1\n1 1\n1 1", "P1\n2 2\n1 1"}) {
    std::istringstream is(bad);
    EXPECT_THROW(read_pbm(is), std::runtime_error) << bad;
  }
}

TEST(Images, PolarizeRoundTrip) {
  const auto g = builtin_glyphs(1, 12)[0];
  const auto v = polarize(g);
  EXPECT_EQ(depolarize(v.elements(), 12, 12), g);
  EXPECT_DOUBLE_EQ(pixel_accuracy(g, g), 1.0);
  auto h = g;
  h.pixels[0] ^= 1;
  EXPECT_DOUBLE_EQ(pixel_accuracy(g, h), 1.0 - 1.0 / 144.0);
  EXPECT_THROW(depolarize(v.elements(), 12, 11), std::invalid_argument);
}

TEST(Config, ParseAndAccessors) {
  std::istringstream is("# header\nseed = 7\n sizes = 2, 4 ,8  # trailing\n\nrate=1e-3\nflag = yes\n");
  const auto c = parse_config(is);
  EXPECT_EQ(c.u64("seed"), 7u);
  EXPECT_EQ(c.size_list("sizes"), (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_DOUBLE_EQ(c.real("rate"), 1e-3);
  EXPECT_TRUE(c.flag("flag"));
  EXPECT_THROW((void)c.str("missing"), std::invalid_argument);
  EXPECT_THROW((void)c.u64("rate"), std::invalid_argument);
  EXPECT_THROW((void)c.flag("seed"), std::invalid_argument);

  for (const char* bad : {"novalue\n", " = 3\n", "a = 1\na = 2\n"}) {
    std::istringstream b(bad);
    EXPECT_THROW(parse_config(b), std::runtime_error) << bad;
  }
}

TEST(Config, PrecedenceCliOverFileOverDefaults) {
  const Config defaults{{"a", "1"}, {"b", "1"}, {"c", "1"}};
  const Config file{{"b", "2"}, {"c", "2"}};
  const Config cli{{"c", "3"}};
  const auto r = resolve_config(defaults, file, cli);
  EXPECT_EQ(r.str("a"), "1");
  EXPECT_EQ(r.str("b"), "2");
  EXPECT_EQ(r.str("c"), "3");
}

TEST(Config, EveryExperimentHasDefaults) {
  for (const char* e : {"prob-vs-iter", "scaling", "noise", "image-decode", "non-unique", "table1", "gen-codebook"}) {
    const auto c = default_config(e);
    EXPECT_TRUE(c.has("seed")) << e;
  }
  EXPECT_THROW(default_config("nope"), std::invalid_argument);
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
  std::vector<int> hit(97, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 4);
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }, 3),
               std::runtime_error);
}

TEST(Experiments, DistinctCodebooksAndInstances) {
  const auto books = gen_distinct_codebooks(3, 4, 8, 5);
  EXPECT_TRUE(books.rows_distinct());
  EXPECT_EQ(gen_distinct_codebooks(3, 4, 8, 5), books);
  EXPECT_THROW(gen_distinct_codebooks(1, 1, 5, 2), std::invalid_argument);

  for (std::uint64_t want : {1u, 2u}) {
    const auto inst = find_instance(11, 2, 4, 5, want, 256);
    ASSERT_TRUE(inst);
    EXPECT_EQ(inst->solutions, want);
    EXPECT_EQ(bind_all(inst->planted, inst->books), inst->target);
    const auto bf = brute_force_factorize(inst->target, inst->books);
    EXPECT_EQ(bf.assignments.size(), want);
  }
}

TEST(Experiments, BoundProductsPartitionTheSpace) {
  const auto books = gen_codebooks(4, 3, 3, 4);
  std::size_t total = 0;
  for (const auto& [word, assigns] : bound_products(books)) {
    total += assigns.size();
    for (const auto& a : assigns) EXPECT_EQ(pack_row(bind_all(a, books).elements()), word);
  }
  EXPECT_EQ(total, 27u);
}

TEST(Experiments, ImageTaskLocationsAvoidImageDifferences) {
  const auto task = make_image_task(builtin_glyphs(4, 12), 4, 6, 5);
  EXPECT_EQ(task.sections(), 24u);
  auto sorted = task.placement;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3}));
  for (std::size_t s = 0; s < task.sections(); ++s) {
    const auto books = task.section_books(s);
    // Every image row bound with its location is the only factorization of its target.
    for (std::size_t k = 0; k < 4; ++k) {
      const auto bf = brute_force_factorize(task.section_target(k, s), books);
      for (const auto& a : bf.assignments) {
        EXPECT_TRUE(std::ranges::equal(books.row(0, a[0]), books.row(0, k)));
        EXPECT_EQ(a[1], task.placement[k]);
      }
    }
  }
  EXPECT_THROW(make_image_task(builtin_glyphs(4, 12), 3, 6, 1), std::invalid_argument);
  EXPECT_THROW(make_image_task(builtin_glyphs(4, 12), 4, 7, 1), std::invalid_argument);
  EXPECT_THROW(make_image_task(builtin_glyphs(4, 12), 4, 33, 1), std::invalid_argument);
}

TEST(Experiments, TableRowsAndGrids) {
  const auto rows = parse_table_rows("100x3x10, 25x4x5");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (std::array<std::size_t, 3>{25, 4, 5}));
  EXPECT_THROW(parse_table_rows("100x3"), std::invalid_argument);
  EXPECT_THROW(parse_table_rows("axbxc"), std::invalid_argument);

  const auto g = log_grid(1e-5, 1e-2, 4);
  EXPECT_NEAR(g.front(), 1e-5, 1e-18);
  EXPECT_NEAR(g[1], 1e-4, 1e-16);
  EXPECT_NEAR(g.back(), 1e-2, 1e-15);
  EXPECT_THROW(log_grid(0, 1, 3), std::invalid_argument);
}

TEST(Experiments, ModeFallbackAndManifest) {
  std::vector<std::string> notices;
  EXPECT_EQ(effective_mode(Mode::kCircuit, 2, 5, 26, notices, "x"), Mode::kCircuit);
  EXPECT_TRUE(notices.empty());
  EXPECT_EQ(effective_mode(Mode::kCircuit, 4, 10, 26, notices, "x"), Mode::kImplicit);
  EXPECT_EQ(notices.size(), 1u);

  const auto text = manifest_text("scaling", default_config("scaling"), {"a.csv"}, {"note"});
  for (const char* key : {"experiment=scaling\n", "param.seed=1\n", "output=a.csv\n", "notice=note\n",
                          "codebook_format_version=", "compiler=", "boost_version="}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(Experiments, GenerationIsDeterministicPerSeed) {
  auto c = default_config("non-unique");
  c.set("runs", "10");
  const auto a = run_non_unique(c);
  const auto b = run_non_unique(c);
  ASSERT_EQ(a.targets.size(), 2u);
  EXPECT_EQ(a.books, b.books);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.targets[i].t, i + 1);
    EXPECT_EQ(a.targets[i].target, b.targets[i].target);
    EXPECT_EQ(a.targets[i].first_correct, b.targets[i].first_correct);
  }
}
