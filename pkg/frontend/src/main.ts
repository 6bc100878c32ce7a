/** Browser entry point: connect to the API origin the page is served from. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const app = new App(root, new ApiClient(""));
  app.track(
    app.init().catch((err) => {
      root.innerHTML = `<p class="load-error">Could not load a project: ${
        err instanceof Error ? err.message : String(err)
      }. Start the server with a project, e.g. <code>cohortdiff serve --project config.json --ui-dir frontend/dist</code>.</p>`;
    }),
  );
}
