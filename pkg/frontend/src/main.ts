/** Browser entry point: mounts the console against the gateway named by
 * the `gateway` query parameter (default: same-origin port 8756). */

import { mountConsole } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("gateway") ?? `http://${window.location.hostname}:8756`;
mountConsole(document.getElementById("root")!, base);
