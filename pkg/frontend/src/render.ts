import { writeFileSync } from "node:fs";
import { extname } from "node:path";

/** Write an SVG string to disk, rasterizing to PNG when the path asks for it. */
export async function writeFigure(svg: string, outPath: string): Promise<void> {
  const ext = extname(outPath).toLowerCase();
  if (ext === ".svg") {
    writeFileSync(outPath, svg, "utf-8");
    return;
  }
  if (ext === ".png") {
    const sharp = (await import("sharp")).default;
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    writeFileSync(outPath, png);
    return;
  }
  throw new Error(`unsupported output format '${ext}': use .svg or .png`);
}

/** Shared entry-point wrapper: print errors and map them to exit code 1. */
export async function runMain(main: () => Promise<void>): Promise<void> {
  try {
    await main();
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exitCode = 1;
  }
}
