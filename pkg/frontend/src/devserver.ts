// Minimal static server for local tagging sessions: serves index.html and
// the compiled bundle. The review API runs separately (looklab review serve).
import { createServer } from "node:http";
import { readFile } from "node:fs/promises";
import { extname, join } from "node:path";

const root = new URL("..", import.meta.url).pathname;
const port = Number(process.env.PORT ?? 5173);

const types: Record<string, string> = {
  ".html": "text/html",
  ".js": "text/javascript",
  ".css": "text/css",
  ".png": "image/png",
};

createServer(async (req, res) => {
  const path = req.url === "/" || req.url === undefined ? "/index.html" : req.url;
  try {
    const body = await readFile(join(root, path.split("?")[0] ?? "index.html"));
    res.writeHead(200, { "Content-Type": types[extname(path)] ?? "application/octet-stream" });
    res.end(body);
  } catch {
    res.writeHead(404);
    res.end("not found");
  }
}).listen(port, () => {
  console.log(`review UI on http://127.0.0.1:${port}/`);
});
